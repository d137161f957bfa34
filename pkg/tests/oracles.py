"""Independent reference computations used as test oracles."""
from fractions import Fraction


def prf(tp, fp, fn):
    """(P, R, F1) as Fractions, with 1 when nothing was expected or predicted."""
    def div(a, b):
        if b == 0:
            return Fraction(1) if tp + fp + fn == 0 else Fraction(0)
        return Fraction(a, b)
    p, r = div(tp, tp + fp), div(tp, tp + fn)
    f = Fraction(0) if p + r == 0 else 2 * p * r / (p + r)
    return p, r, f


def set_counts(gold, pred):
    """tp/fp/fn by direct enumeration rather than set algebra."""
    gold, pred = list(gold), list(pred)
    tp = sum(1 for x in pred if any(x == y for y in gold))
    return tp, len(pred) - tp, len(gold) - tp


def multiset_counts(gold, pred):
    """Greedy one-to-one matching of equal items."""
    remaining = list(gold)
    tp = 0
    for x in pred:
        for k, y in enumerate(remaining):
            if x == y:
                del remaining[k]
                tp += 1
                break
    return tp, len(pred) - tp, len(remaining)
