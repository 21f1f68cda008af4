import os
import re

from itest import Here, Group


def normalize_key(gen, orig):
    if gen and re.match('^{0-9A-F-}{36}$', orig):
        Here(tag="regex").given(gen, True).given(orig, "0123456789ABCDEF0123456789ABCDEF0123").check_true(Group(1))
        return orig.lower()
    return os.path.basename(orig)
