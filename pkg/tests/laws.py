"""Algebraic laws of the process operations and the tau-laws, as predicates.

Each law takes random processes (and names or renamings) and returns True
when both sides agree.  ``same`` is isomorphism of reachable parts.
"""
from hypothesis import strategies as st

from conftest import ltss
from procverify.algebra import choice, nil, parallel, prefix, rename, restrict
from procverify.equiv import equivalent
from procverify.lts import act_of, isomorphic, parse_action, reachable_part, tau

NAMES = ("a", "b", "c")
SMALL = ltss(max_states=5, alphabet=("a?", "b?", "a!", "c!", "tau"), max_trans=8)
actions = st.sampled_from(("a?", "b!", "c?", "tau")).map(parse_action)
name_sets = st.sets(st.sampled_from(NAMES))
renamings = st.dictionaries(st.sampled_from(NAMES), st.sampled_from(NAMES + ("d",)))
injective = st.permutations(NAMES).map(lambda p: dict(zip(NAMES, p)))


def same(p, q) -> bool:
    return isomorphic(reachable_part(p), reachable_part(q), limit=None) is not None


def names(p) -> set:
    return {a.name for a in act_of(p)}


def complement_names(p1, p2) -> set:
    """names(Act(P1) intersected with the complements of Act(P2))."""
    co2 = {a.complement() for a in act_of(p2)}
    return {a.name for a in act_of(p1) if a in co2}


def image(f, L):
    return {f.get(n, n) for n in L}


def preimage(f, L, universe):
    return {n for n in universe if f.get(n, n) in L}


def law1(p1, p2, p3):
    return same(choice(choice(p1, p2), p3), choice(p1, choice(p2, p3)))


def law2(p1, p2, p3):
    return same(parallel(parallel(p1, p2), p3), parallel(p1, parallel(p2, p3)))


def law3(p1, p2):
    return same(choice(p1, p2), choice(p2, p1))


def law4(p1, p2):
    return same(parallel(p1, p2), parallel(p2, p1))


def law5(p):
    return same(parallel(p, nil()), p)


def law6(L):
    return same(restrict(nil(), L), nil())


def law7(f):
    return same(rename(nil(), f), nil())


def law8(p, L):
    L = set(L) - names(p)
    return same(restrict(p, L), p)


def law9(a, p, L):
    lhs = restrict(prefix(a, p), L)
    if not a.is_tau and a.name in L:
        return same(lhs, nil())
    return same(lhs, prefix(a, restrict(p, L)))


def law10(p1, p2, L):
    return same(restrict(choice(p1, p2), L), choice(restrict(p1, L), restrict(p2, L)))


def law11(p1, p2, L):
    L = set(L) - complement_names(p1, p2) - complement_names(p2, p1)
    return same(restrict(parallel(p1, p2), L), parallel(restrict(p1, L), restrict(p2, L)))


def law12(p, L1, L2):
    return same(restrict(restrict(p, L1), L2), restrict(p, set(L1) | set(L2)))


def law13(p, f, L):
    universe = names(p) | set(NAMES)
    return same(restrict(rename(p, f), L), rename(restrict(p, preimage(f, L, universe)), f))


def law14(p):
    return same(rename(p, {n: n for n in NAMES}), p)


def law15(p, f, g):
    g = dict(g)
    for n in names(p):
        g[n] = f.get(n, n)
    return same(rename(p, f), rename(p, g))


def law16(a, p, f):
    fa = a if a.is_tau else a.with_name(f.get(a.name, a.name))
    return same(rename(prefix(a, p), f), prefix(fa, rename(p, f)))


def law17(p1, p2, f):
    return same(rename(choice(p1, p2), f), choice(rename(p1, f), rename(p2, f)))


def law18(p1, p2, f):
    # f is a permutation, hence injective on every name set
    return same(rename(parallel(p1, p2), f), parallel(rename(p1, f), rename(p2, f)))


def law19(p, f, L):
    return same(rename(restrict(p, L), f), restrict(rename(p, f), image(f, L)))


def law20(p, f, g):
    from procverify.algebra import compose_renamings
    return same(rename(rename(p, f), g), rename(p, compose_renamings(f, g)))


def law21(p):
    """P + 0 ~ P and P + P ~ P."""
    return equivalent(choice(p, nil()), p, "strong") and equivalent(choice(p, p), p, "strong")


# ---------------------------------------------------------------- tau laws

def tau_law1(a, p):
    return equivalent(prefix(a, prefix(tau, p)), prefix(a, p), "cong")


def tau_law2(p):
    return equivalent(choice(p, prefix(tau, p)), prefix(tau, p), "cong")


def tau_law3(a, p1, p2):
    inner = prefix(a, choice(p1, prefix(tau, p2)))
    return equivalent(choice(inner, prefix(a, p2)), inner, "cong")


def tau_law4(p1, p2):
    both = choice(p1, p2)
    return equivalent(choice(p1, prefix(tau, both)), prefix(tau, both), "cong")
