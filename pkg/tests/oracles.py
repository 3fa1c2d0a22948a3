"""Independent reference computations used to cross-check the library.

Nothing here imports the package's elimination code: ranks come from sympy
and ideal components are assembled directly from word enumeration.
"""

import itertools

import sympy


def ideal_component_rank(n, relations, d):
    """Rank of sum_{i+j=d-2} V^i (x) R (x) V^j inside V^d.

    ``relations`` are dicts ``(a, b) -> int/Fraction`` on degree-two words.
    """
    if d < 2:
        return 0
    words = list(itertools.product(range(n), repeat=d))
    index = {w: k for k, w in enumerate(words)}
    rows = []
    for i in range(d - 1):
        for left in itertools.product(range(n), repeat=i):
            for right in itertools.product(range(n), repeat=d - 2 - i):
                for rel in relations:
                    row = [0] * len(words)
                    for (a, b), c in rel.items():
                        row[index[left + (a, b) + right]] += sympy.Rational(c)
                    if any(row):
                        rows.append(row)
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


def oracle_hilbert(n, relations, d):
    return n**d - ideal_component_rank(n, relations, d)


def rewrite_hilbert(n, rules, d):
    """Dimension count by rewriting with a monomial rule set ``lead -> combination``.

    Only valid when ``rules`` is already confluent (e.g. commutation rules);
    used on hand-picked presentations where that holds.
    """
    count = 0
    for w in itertools.product(range(n), repeat=d):
        if not any(w[k:k + 2] in rules for k in range(d - 1)):
            count += 1
    return count
