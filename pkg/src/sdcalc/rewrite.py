"""Rewrite-based normalization of diagram terms.

The rule set is terminating and confluent on the fragment it covers:

* identity absorption (sequential and parallel units),
* double-dagger elimination and dagger distribution over composites,
* double-swap elimination,
* snake elimination for cup/cap pairs,
* symmetry absorption into cups and caps,
* speciality (copy followed by its dagger).

Every reduction strictly decreases the number of non-identity leaves, so
normalization finishes in at most ``term_size(d) ** 2`` rule firings.  The
normal form is canonical: sequential and parallel chains are flattened and
re-associated to the right, identity factors are split into single wires,
and daggers sit only on leaves.  Normalization never changes the tensor a
diagram evaluates to.
"""

from __future__ import annotations

from .diagrams import (
    Box, Cap, Copy, Cup, Dagger, Delete, Diagram, Discard, Id, Par, Seq,
    Swap, dagger, term_size, validate,
)
from .wires import UNIT, Word


def normalize(d: Diagram) -> Diagram:
    """Return the canonical normal form of a diagram."""
    return normalize_with_stats(d)[0]


def normalize_with_stats(d: Diagram) -> tuple[Diagram, int]:
    """Normalize and also report how many rule firings it took."""
    validate(d)
    counter = [0]
    current = _expand_daggers(d, counter)
    limit = term_size(d) ** 2 + 16
    for _ in range(limit):
        after = _normal(current, counter)
        if after == current:
            return after, counter[0]
        current = after
    raise RuntimeError("normalization exceeded its step bound")


# -- dagger elimination -------------------------------------------------------

_DAGGER_LEAVES = (Box, Copy, Delete, Discard)


def _expand_daggers(d, counter):
    """Push daggers down so they only wrap generator-like leaves."""
    if isinstance(d, Seq):
        return Seq(_expand_daggers(d.first, counter),
                   _expand_daggers(d.second, counter))
    if isinstance(d, Par):
        return Par(_expand_daggers(d.left, counter),
                   _expand_daggers(d.right, counter))
    if isinstance(d, Dagger):
        inner = d.inner
        if isinstance(inner, Dagger):
            counter[0] += 1
            return _expand_daggers(inner.inner, counter)
        if isinstance(inner, _DAGGER_LEAVES):
            return d
        counter[0] += 1
        return _expand_daggers(dagger(inner), counter)
    return d


# -- chain and factor views ---------------------------------------------------

def _seq_chain(d):
    if isinstance(d, Seq):
        return _seq_chain(d.first) + _seq_chain(d.second)
    return [d]


def _par_factors(d):
    """Parallel factors of a step, identities split into single wires."""
    if isinstance(d, Par):
        return _par_factors(d.left) + _par_factors(d.right)
    if isinstance(d, Id):
        return [Id(Word(w)) for w in d.word]
    return [d]


def _par_rebuild(factors):
    if not factors:
        return Id(UNIT)
    if all(isinstance(f, Id) for f in factors):
        word = UNIT
        for f in factors:
            word = word + f.word
        return Id(word)
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = Par(f, out)
    return out


def _seq_rebuild(steps):
    out = steps[-1]
    for s in reversed(steps[:-1]):
        out = Seq(s, out)
    return out


def _normal(d, counter):
    if isinstance(d, Seq):
        chain = []
        for part in (d.first, d.second):
            chain.extend(_seq_chain(_normal(part, counter)))
        chain = _simplify_chain(chain, counter)
        if not chain:
            return Id(d.dom)
        return _seq_rebuild(chain)
    if isinstance(d, Par):
        factors = []
        for part in (d.left, d.right):
            factors.extend(_par_factors(_normal(part, counter)))
        factors = [f for f in factors if not (isinstance(f, Id) and not f.word)]
        return _par_rebuild(factors)
    return d


def _simplify_chain(chain, counter):
    while True:
        pruned = [s for s in chain if not isinstance(s, Id)]
        counter[0] += len(chain) - len(pruned)
        chain = pruned
        fired = False
        for k in range(len(chain) - 1):
            res = _try_pair(chain[k], chain[k + 1])
            if res is not None:
                chain[k], chain[k + 1] = res
                counter[0] += 1
                fired = True
                break
        if not fired:
            return chain


# -- adjacent-pair rules -------------------------------------------------------

def _cod_offsets(factors):
    offs, pos = [], 0
    for f in factors:
        offs.append(pos)
        pos += len(f.cod)
    return offs


def _dom_offsets(factors):
    offs, pos = [], 0
    for f in factors:
        offs.append(pos)
        pos += len(f.dom)
    return offs


def _find_dom(factors, offsets, start):
    """Index of the factor whose (nonempty) domain begins at ``start``."""
    for j, f in enumerate(factors):
        if offsets[j] == start and len(f.dom) > 0:
            return j
    return None


def _try_pair(f, g):
    """Try every adjacent-pair rule between two sequential steps.

    Returns the rewritten pair of steps, or ``None`` when nothing fires.
    Either returned step may be an identity, which the caller prunes.
    """
    F, G = _par_factors(f), _par_factors(g)
    cod = _cod_offsets(F)
    dom = _dom_offsets(G)

    for i, fi in enumerate(F):
        p = cod[i]

        if isinstance(fi, Swap):
            j = _find_dom(G, dom, p)
            if j is not None:
                gj = G[j]
                if isinstance(gj, Swap) and (gj.a, gj.b) == (fi.b, fi.a):
                    ids = [Id(Word(fi.a)), Id(Word(fi.b))]
                    return (_par_rebuild(F[:i] + ids + F[i + 1:]),
                            _par_rebuild(G[:j] + ids + G[j + 1:]))
                if fi.a == fi.b and isinstance(gj, Cap) and gj.wire == fi.a:
                    ids = [Id(Word(fi.a)), Id(Word(fi.a))]
                    return (_par_rebuild(F[:i] + ids + F[i + 1:]), g)

        if isinstance(fi, Cup):
            j = _find_dom(G, dom, p)
            if j is not None:
                gj = G[j]
                if isinstance(gj, Swap) and gj.a == gj.b == fi.wire:
                    ids = [Id(Word(fi.wire)), Id(Word(fi.wire))]
                    return (f, _par_rebuild(G[:j] + ids + G[j + 1:]))

        if isinstance(fi, Copy):
            j = _find_dom(G, dom, p)
            if j is not None:
                gj = G[j]
                if (isinstance(gj, Dagger) and isinstance(gj.inner, Copy)
                        and gj.inner.wire == fi.wire):
                    one = [Id(Word(fi.wire))]
                    return (_par_rebuild(F[:i] + one + F[i + 1:]),
                            _par_rebuild(G[:j] + one + G[j + 1:]))

    # snake patterns need a pair of adjacent factors on each side
    for i in range(len(F) - 1):
        fi, fn = F[i], F[i + 1]
        p = cod[i]
        # (1 x cup) then (cap x 1)
        if (isinstance(fi, Id) and len(fi.word) == 1 and isinstance(fn, Cup)
                and fn.wire == fi.word[0]):
            a = fn.wire
            j = _find_dom(G, dom, p)
            if j is not None and isinstance(G[j], Cap) and G[j].wire == a:
                jn = _find_dom(G, dom, p + 2)
                if jn is not None and jn == j + 1 and _is_id_wire(G[jn], a):
                    one = [Id(Word(a))]
                    return (_par_rebuild(F[:i] + one + F[i + 2:]),
                            _par_rebuild(G[:j] + one + G[j + 2:]))
        # (cup x 1) then (1 x cap)
        if (isinstance(fi, Cup) and _is_id_wire(fn, fi.wire)):
            a = fi.wire
            j = _find_dom(G, dom, p)
            if j is not None and _is_id_wire(G[j], a):
                jn = _find_dom(G, dom, p + 1)
                if jn is not None and jn == j + 1 and isinstance(G[jn], Cap) \
                        and G[jn].wire == a:
                    one = [Id(Word(a))]
                    return (_par_rebuild(F[:i] + one + F[i + 2:]),
                            _par_rebuild(G[:j] + one + G[j + 2:]))

    return None


def _is_id_wire(f, wire):
    return isinstance(f, Id) and len(f.word) == 1 and f.word[0] == wire
