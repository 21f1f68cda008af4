"""Reference condition splitter built on the CPython parser.

Reads a JSON list of if/elif/while header lines on stdin and prints, for
each, the top-level and/or operands as source segments. Nested BoolOps are
flattened unless they are parenthesized in the source.
"""
import ast
import json
import sys


def parenthesized(source, node):
    start = node.col_offset
    end = node.end_col_offset
    before = source[:start].rstrip()
    after = source[end:].lstrip()
    return before.endswith("(") and after.startswith(")")


def widen(source, node):
    """Source segment of node including redundant parentheses around it."""
    start, end = node.col_offset, node.end_col_offset
    while True:
        before = source[:start].rstrip()
        after = source[end:].lstrip()
        if before.endswith("(") and after.startswith(")"):
            # only redundant parens: the '(' must not belong to a call
            prefix = before[:-1].rstrip()
            if prefix and (prefix[-1].isalnum() or prefix[-1] in "_)]"):
                if not prefix.endswith(("and", "or", "not", "if", "elif", "while", "in", "is")):
                    break
            start = len(before) - 1
            end = len(source) - len(after) + 1
        else:
            break
    return source[start:end]


def flatten(source, node):
    if isinstance(node, ast.BoolOp) and not parenthesized(source, node):
        out = []
        for value in node.values:
            out.extend(flatten(source, value))
        return out
    return [widen(source, node)]


def split(header):
    keyword, rest = header.split(None, 1)
    colon = rest.rstrip().rfind(":")
    condition = rest[:colon]
    source = condition.strip()
    body = ast.parse(source, mode="eval").body
    if isinstance(body, ast.BoolOp) and not parenthesized(source, body):
        return [o.strip() for o in flatten(source, body)]
    return [source]


def main():
    headers = json.load(sys.stdin)
    json.dump([split(h) for h in headers], sys.stdout)


if __name__ == "__main__":
    main()
