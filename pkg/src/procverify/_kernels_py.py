"""Pure-Python versions of the bisimulation kernels.

Adjacency is passed in CSR form: ``off`` (length n+1), ``lab`` and ``dst``.
Within each state the entries are sorted by label.  Relations are
``numpy.uint8`` matrices of shape ``(n1, n2)``.
"""
import numpy as np

BACKEND = "python"


def _rows(off, lab, dst):
    n = len(off) - 1
    rows = []
    for i in range(n):
        d = {}
        for k in range(off[i], off[i + 1]):
            d.setdefault(int(lab[k]), []).append(int(dst[k]))
        rows.append(d)
    return rows


def _answered(i, j, mu, chal, resp, transpose):
    rj = resp[j]
    for a, targets in chal[i].items():
        answers = rj.get(a)
        if answers is None:
            return False
        for t1 in targets:
            if transpose:
                if not any(mu[t2, t1] for t2 in answers):
                    return False
            elif not any(mu[t1, t2] for t2 in answers):
                return False
    return True


def _step(mu, ch1, re1, ch2, re2, mask):
    n1, n2 = mu.shape
    out = np.zeros((n1, n2), dtype=np.uint8)
    for i in range(n1):
        for j in range(n2):
            if mask is not None and not mask[i, j]:
                continue
            if _answered(i, j, mu, ch1, re2, False) and _answered(j, i, mu, ch2, re1, True):
                out[i, j] = 1
    return out


def refine_step(mu, c1, r1, c2, r2):
    """One application of the matching operator.

    ``c1``/``c2`` are the challenge moves and ``r1``/``r2`` the answer moves
    of each side, each a ``(off, lab, dst)`` triple.
    """
    mu = np.asarray(mu, dtype=np.uint8)
    return _step(mu, _rows(*c1), _rows(*r1), _rows(*c2), _rows(*r2), None)


def greatest_fixpoint(mu0, c1, r1, c2, r2):
    """Iterate :func:`refine_step` from ``mu0`` until it stops changing.

    Returns the limit and the number of steps that changed the relation.
    """
    mu = np.asarray(mu0, dtype=np.uint8).copy()
    ch1, re1, ch2, re2 = _rows(*c1), _rows(*r1), _rows(*c2), _rows(*r2)
    # starting from the full relation the sequence only shrinks
    full = bool(mu.all())
    steps = 0
    while True:
        nxt = _step(mu, ch1, re1, ch2, re2, mu if full else None)
        if np.array_equal(nxt, mu):
            return mu, steps
        mu = nxt
        steps += 1


def tau_closure(n, off, dst):
    """Reflexive-transitive closure of a successor relation, as CSR."""
    out_off = [0]
    out_dst = []
    for i in range(n):
        seen = {i}
        stack = [i]
        while stack:
            u = stack.pop()
            for k in range(off[u], off[u + 1]):
                v = int(dst[k])
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        out_dst.extend(sorted(seen))
        out_off.append(len(out_dst))
    return np.asarray(out_off, dtype=np.int64), np.asarray(out_dst, dtype=np.int64)
