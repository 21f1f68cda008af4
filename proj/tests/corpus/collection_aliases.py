from collections import OrderedDict

from itest import Here


def unwrap_aliases(children):
    aliases = [child[1] for child in children if child[0] == "alias"]
    Here(tag="collection").given(children, [("alias", "a"), ("field", "b"), ("alias", "c")]).check_eq(aliases, ["a", "c"])
    counts = OrderedDict((name, len(name)) for name in aliases)
    Here(tag="collection").given(aliases, ["ab", "c"]).check_eq(list(counts.items()), [("ab", 2), ("c", 1)])
    return counts
