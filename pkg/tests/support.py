"""Shared fixtures data: the classification specs and a coefficient mutator."""

import random

from gmpy2 import mpq

from vatwist import DerivationSpec, LaurentPoly, ModuleSpec, NilScalar, PuiseuxSeries

# (p as {exponent: coeff}, N_q, L)
POSITIVE_SPECS = [({0: 1}, 0, 1), ({0: 1, 1: 1}, 0, 1), ({0: 2, 1: 3, 3: 1}, 0, 1)]
NEGATIVE_SPECS = [({2: -1}, 0, -1), ({0: 1, 3: -1}, 1, -1)]
SPECS = POSITIVE_SPECS + NEGATIVE_SPECS


def spec_label(p, nq, L):
    body = " + ".join(f"{c}*s^{e}" for e, c in sorted(p.items()))
    return f"p={body},Nq={nq},L={L:+d}"


def make_spec(p, nq, L, dim, alpha=None):
    D = DerivationSpec(LaurentPoly(p), nq)
    if alpha is None:
        return ModuleSpec.natural(D, dim, L)
    return ModuleSpec(D, dim, L, alpha)


def mutate(S, rng: random.Random):
    """Add a nonzero rational to one certified coefficient of S."""
    cands = [(m, k) for m in S.terms for k in range(S.order) if m <= S.trunc[k]]
    m, k = rng.choice(cands)
    delta = mpq(rng.choice([1, -1]) * rng.randint(1, 5), rng.randint(1, 4))
    comps = list(S.terms[m].comps)
    comps[k] = comps[k] + delta
    terms = dict(S.terms)
    terms[m] = NilScalar(S.order, comps)
    return PuiseuxSeries(terms, order=S.order, ramification=S.ramification, trunc=S.trunc), (m, k)
