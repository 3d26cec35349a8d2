"""Brute-force reference computations over plain rows.

Shares no code with the package: rows are ``(values_dict, label)`` pairs and
every quantity is summed directly from its definition.
"""

import math


def _h(sizes):
    n = sum(sizes)
    total = 0.0
    for k in sizes:
        if k:
            total += (k / n) * (math.log(k / n) / math.log(2))
    return -total if total else 0.0


def entropy(labels):
    return _h([labels.count(v) for v in sorted(set(labels))])


def gain(rows, attr):
    labels = [lab for _, lab in rows]
    if not rows:
        return 0.0
    rest = 0.0
    for v in sorted({vals[attr] for vals, _ in rows}):
        sub = [lab for vals, lab in rows if vals[attr] == v]
        rest += len(sub) / len(rows) * entropy(sub)
    return entropy(labels) - rest


def split(rows, attr):
    return entropy([vals[attr] for vals, _ in rows])


def ratio(rows, attr):
    s = split(rows, attr)
    return None if s == 0 else gain(rows, attr) / s


def majority(labels, tie="Fail"):
    p, f = labels.count("Pass"), labels.count("Fail")
    if p == f:
        return tie
    return "Pass" if p > f else "Fail"


def tree(rows, attrs, use_ratio=True, parent=None):
    """Nested tuples: ("leaf", label) or ("node", attr, {value: subtree})."""
    labels = [lab for _, lab in rows]
    if not rows:
        return ("leaf", parent)
    if len(set(labels)) == 1:
        return ("leaf", labels[0])
    best, best_score = None, None
    for a in attrs:
        g = gain(rows, a)
        if g <= 1e-12:
            continue
        score = ratio(rows, a) if use_ratio else g
        if score is None:
            continue
        if best is None or score > best_score:
            best, best_score = a, score
    if best is None:
        return ("leaf", majority(labels))
    rest = [a for a in attrs if a != best]
    here = majority(labels)
    return ("node", best, {v: tree([r for r in rows if r[0][best] == v], rest, use_ratio, here)
                           for v in ("Pass", "Fail")})


def predict(t, values):
    while t[0] == "node":
        t = t[2][values[t[1]]]
    return t[1]
