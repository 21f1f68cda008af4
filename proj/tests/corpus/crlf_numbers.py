import re

from itest import Here


def first_number(text):
    found = re.findall(r"\d+", text)
    Here(tag="regex").given(text, "a1 b22 c333").check_eq(found, ["1", "22", "333"])
    return int(found[0]) if found else None
