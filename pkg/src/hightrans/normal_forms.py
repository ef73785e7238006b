"""Canonical forms and the word problem for composite groups.

Two reducers, each in two phases:

  * phase 1 is a stack pass that removes pinches (HNN) or merges and
    absorbs edge-subgroup syllables (amalgams), reaching minimal syllable
    count; ties between disjoint pinches resolve leftmost-innermost by
    construction of the stack.
  * phase 2 walks right to left, replacing each remaining base part by its
    canonical right-coset representative and carrying the subgroup part one
    slot leftward, so the subgroup contribution accumulates at the far left.

Coset decompositions that are only boundedly decidable raise
UndecidedError, which propagates to the caller untouched.
"""

from __future__ import annotations

from . import groups
from .groups import Element


def reduce_amalgam_tokens(handle, tokens):
    """Reduce (side, factor element) tokens to a canonical amalgam payload."""
    edge_src = handle.edge_source
    lead = edge_src.identity()
    stack = []

    def absorb(sigma):
        # a subgroup element surfacing between stack top and the cursor
        nonlocal lead
        while True:
            if not stack:
                lead = lead * sigma
                return
            side, h = stack[-1]
            h = h * handle.edge(side).apply(sigma)
            if handle.edge(side).contains(h):
                stack.pop()
                sigma = handle.edge(side).preimage(h)
                continue
            stack[-1] = (side, h)
            return

    for side, x in tokens:
        if x.owner is not handle.factor(side):
            raise groups.OwnerMismatch(
                f"token {x!r} does not live in factor {side} of {handle.name!r}")
        if x.is_identity:
            continue
        if stack and stack[-1][0] == side:
            merged = stack[-1][1] * x
            stack.pop()
            if merged.is_identity:
                continue
            if handle.edge(side).contains(merged):
                absorb(handle.edge(side).preimage(merged))
            else:
                stack.append((side, merged))
        elif handle.edge(side).contains(x):
            absorb(handle.edge(side).preimage(x))
        else:
            stack.append((side, x))

    syls = [None] * len(stack)
    carry = None
    for i in range(len(stack) - 1, -1, -1):
        side, h = stack[i]
        if carry is not None:
            h = h * handle.edge(side).apply(carry)
        s, r = handle.edge(side).decompose(h)
        syls[i] = (side, r)
        carry = s
    if carry is not None:
        lead = lead * carry
    return (lead, tuple(syls))


def reduce_hnn_tokens(handle, tokens):
    """Reduce ("b", element) / ("t", eps) tokens to a Britton-reduced payload."""
    base = handle.base
    head = base.identity()
    stack = []

    def push_base(b):
        nonlocal head
        if stack:
            eps, h = stack[-1]
            stack[-1] = (eps, h * b)
        else:
            head = head * b

    for kind, val in tokens:
        if kind == "b":
            if val.owner is not base:
                raise groups.OwnerMismatch(
                    f"token {val!r} does not live in the base of {handle.name!r}")
            push_base(val)
        else:
            delta = val
            if delta not in (1, -1):
                raise ValueError(f"stable letter exponent must be +-1, got {delta}")
            if stack and stack[-1][0] == -delta and handle.sigma_edge(stack[-1][0]).contains(stack[-1][1]):
                eps, h = stack.pop()
                push_base(handle.twist_base(h, eps))
            else:
                stack.append((delta, base.identity()))

    tail = [None] * len(stack)
    carry = None
    for i in range(len(stack) - 1, -1, -1):
        eps, h = stack[i]
        if carry is not None:
            h = h * carry
        edge = handle.sigma_edge(eps)
        s, r = edge.decompose(h)
        tail[i] = (eps, r)
        carry = handle.sigma_edge(-eps).apply(s)
    if carry is not None:
        head = head * carry
    return (head, tuple(tail))


def _raw_tokens(handle, word):
    """Parse (label, exponent) syllables into reducer tokens."""
    if handle.kind == "amalgam":
        toks = []
        for lab, exp in word:
            if lab in handle.left.labels:
                toks.append((0, handle.left.generator(lab) ** exp))
            elif lab in handle.right.labels:
                toks.append((1, handle.right.generator(lab) ** exp))
            else:
                raise ValueError(f"unknown generator {lab!r} in {handle.name!r}")
        return toks
    toks = []
    for lab, exp in word:
        if lab == handle.stable_label:
            step = 1 if exp > 0 else -1
            toks.extend([("t", step)] * abs(exp))
        elif lab in handle.base.labels:
            toks.append(("b", handle.base.generator(lab) ** exp))
        else:
            raise ValueError(f"unknown generator {lab!r} in {handle.name!r}")
    return toks


def britton_reduce(handle, word):
    """Normal form of a raw (label, exponent) word in an HNN group."""
    if handle.kind != "hnn":
        raise ValueError(f"{handle.name!r} is not an HNN group")
    return Element(handle, reduce_hnn_tokens(handle, _raw_tokens(handle, word)))


def amalgam_reduce(handle, word):
    """Normal form of a raw (label, exponent) word in an amalgam."""
    if handle.kind != "amalgam":
        raise ValueError(f"{handle.name!r} is not an amalgam")
    return Element(handle, reduce_amalgam_tokens(handle, _raw_tokens(handle, word)))


def reduce_word(handle, word):
    """Normal form of a raw word in any group kind."""
    if handle.kind == "hnn":
        return britton_reduce(handle, word)
    if handle.kind == "amalgam":
        return amalgam_reduce(handle, word)
    return handle.element_from_word(word)


def syllable_length(g):
    """Number of syllables in the normal form; 0 only for the identity.

    For HNN elements every stable letter counts, plus every non-identity
    base part (head or in-tail representative).  For amalgam elements every
    alternating-factor representative counts, plus a leading edge-subgroup
    part when present.
    """
    handle = g.owner
    if handle.kind == "hnn":
        head, tail = g.payload
        n = 0 if head.is_identity else 1
        for eps, r in tail:
            n += 1
            if not r.is_identity:
                n += 1
        return n
    if handle.kind == "amalgam":
        sigma, syls = g.payload
        n = 0 if sigma.is_identity else 1
        return n + len(syls)
    raise ValueError(f"{handle.name!r} is not a composite group")


def stable_letter_count(g):
    if g.owner.kind != "hnn":
        raise ValueError("stable letters only exist in HNN groups")
    return len(g.payload[1])


def parse_word(handle, text):
    """Parse a word string like ``a b^-2 t`` into a normal-form element.

    Tokens are whitespace-separated generator labels with an optional
    ``^exponent``; ``1`` or the empty string is the identity.
    """
    text = text.strip()
    if text in ("", "1"):
        return handle.identity()
    word = []
    for tok in text.split():
        if "^" in tok:
            lab, _, e = tok.partition("^")
            try:
                exp = int(e)
            except ValueError:
                raise ValueError(f"bad exponent in token {tok!r}")
        else:
            lab, exp = tok, 1
        word.append((lab, exp))
    return reduce_word(handle, word)
