"""Matroids given by an explicit basis family.

A matroid here is a ground set {1..m} together with the set of its bases
(r-subsets).  Basis exchange is validated on construction.  Loops
(elements in no basis) are representable; minors relabel the surviving
elements to 1..m-1 preserving order; contracting a loop or deleting a
coloop raises rather than silently adjusting rank.

Also provides isomorphism testing (lexicographically least permutation),
a canonical key for memoization, the basis-generating polynomial, the
labeling search that matches a matroid against a target Rayleigh
difference, and a structured text (JSON) file format.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Iterable, Sequence

from hppcheck.polynomial import Polynomial
from hppcheck.rayleigh import rayleigh_diff_multiaffine


class BasisExchangeError(ValueError):
    """Raised when a claimed basis family violates basis exchange."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class DegenerateMinorError(ValueError):
    """Raised when contracting a loop or deleting a coloop."""


class MatroidParseError(ValueError):
    """Raised when matroid file text is malformed."""


def _subset_to_mask(subset: Iterable[int], m: int) -> int:
    mask = 0
    for e in subset:
        e = int(e)
        if not 1 <= e <= m:
            raise ValueError(f"element {e} outside ground set 1..{m}")
        bit = 1 << (e - 1)
        if mask & bit:
            raise ValueError(f"repeated element {e} in subset")
        mask |= bit
    return mask


def _mask_to_subset(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


class Matroid:
    """Immutable matroid on ground set {1..m} with explicit bases."""

    __slots__ = ("name", "m", "rank", "_masks", "_mask_set", "_degrees",
                 "_pair_degrees", "_canonical")

    def __init__(self, m: int, rank: int, bases: Iterable[Iterable[int]],
                 name: str | None = None, validate: bool = True):
        if m < 1:
            raise ValueError("ground set must be nonempty")
        masks = sorted({_subset_to_mask(b, m) for b in bases})
        if not masks:
            raise BasisExchangeError("empty basis family")
        for mask in masks:
            if mask.bit_count() != rank:
                raise ValueError(
                    f"basis {_mask_to_subset(mask)} does not have rank {rank}")
        self.name = name
        self.m = m
        self.rank = rank
        self._masks = tuple(masks)
        self._mask_set = frozenset(masks)
        self._degrees: tuple[int, ...] | None = None
        self._pair_degrees: dict[tuple[int, int], int] | None = None
        self._canonical = None
        if validate:
            self._validate_exchange()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_bases(cls, m: int, rank: int, bases: Iterable[Iterable[int]],
                   name: str | None = None) -> Matroid:
        return cls(m, rank, bases, name=name)

    @classmethod
    def from_nonbases(cls, m: int, rank: int, nonbases: Iterable[Iterable[int]],
                      name: str | None = None) -> Matroid:
        """All r-subsets of {1..m} except the listed ones."""
        non = {_subset_to_mask(b, m) for b in nonbases}
        for mask in non:
            if mask.bit_count() != rank:
                raise ValueError(
                    f"nonbasis {_mask_to_subset(mask)} does not have rank {rank}")
        bases = [c for c in combinations(range(1, m + 1), rank)
                 if _subset_to_mask(c, m) not in non]
        return cls(m, rank, bases, name=name)

    def _validate_exchange(self) -> None:
        masks = self._masks
        in_family = self._mask_set
        for b1 in masks:
            for b2 in masks:
                only1 = b1 & ~b2
                if not only1:
                    continue
                only2 = b2 & ~b1
                x_bits = only1
                while x_bits:
                    x = x_bits & -x_bits
                    x_bits ^= x
                    removed = b1 ^ x
                    y_bits = only2
                    ok = False
                    while y_bits:
                        y = y_bits & -y_bits
                        y_bits ^= y
                        if (removed | y) in in_family:
                            ok = True
                            break
                    if not ok:
                        w = (_mask_to_subset(b1), _mask_to_subset(b2),
                             _mask_to_subset(x)[0])
                        raise BasisExchangeError(
                            f"basis exchange fails for B1={w[0]}, B2={w[1]}, "
                            f"x={w[2]}: no y in B2\\B1 with B1-x+y a basis",
                            witness=w)

    # -- basic accessors ----------------------------------------------------

    def bases(self) -> tuple[tuple[int, ...], ...]:
        """Bases as sorted tuples, lexicographically sorted."""
        return tuple(sorted(_mask_to_subset(mask) for mask in self._masks))

    def basis_masks(self) -> tuple[int, ...]:
        return self._masks

    def num_bases(self) -> int:
        return len(self._masks)

    def is_basis(self, subset: Iterable[int]) -> bool:
        return _subset_to_mask(subset, self.m) in self._mask_set

    def corank(self) -> int:
        return self.m - self.rank

    def loops(self) -> tuple[int, ...]:
        """Elements contained in no basis."""
        used = 0
        for mask in self._masks:
            used |= mask
        return _mask_to_subset(((1 << self.m) - 1) & ~used)

    def coloops(self) -> tuple[int, ...]:
        """Elements contained in every basis."""
        common = (1 << self.m) - 1
        for mask in self._masks:
            common &= mask
        return _mask_to_subset(common)

    def element_degree(self, e: int) -> int:
        """Number of bases containing e."""
        if self._degrees is None:
            degs = [0] * self.m
            for mask in self._masks:
                for i in range(self.m):
                    if mask >> i & 1:
                        degs[i] += 1
            self._degrees = tuple(degs)
        return self._degrees[e - 1]

    def _pair_degree(self, e: int, f: int) -> int:
        if self._pair_degrees is None:
            pd: dict[tuple[int, int], int] = {}
            for e1, f1 in combinations(range(1, self.m + 1), 2):
                both = (1 << (e1 - 1)) | (1 << (f1 - 1))
                pd[(e1, f1)] = sum(1 for mask in self._masks
                                   if mask & both == both)
            self._pair_degrees = pd
        key = (e, f) if e < f else (f, e)
        return self._pair_degrees[key]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return (self.m, self.rank, self._masks) == (other.m, other.rank, other._masks)

    def __hash__(self) -> int:
        return hash((self.m, self.rank, self._masks))

    def __repr__(self) -> str:
        label = self.name or "Matroid"
        return f"<{label}: m={self.m} rank={self.rank} bases={len(self._masks)}>"

    # -- minors, dual, relabeling -------------------------------------------

    def delete(self, e: int) -> Matroid:
        """Delete a non-coloop element; survivors are relabeled to 1..m-1."""
        self._check_element(e)
        if e in self.coloops():
            raise DegenerateMinorError(
                f"deleting coloop {e} would drop the rank; not supported")
        bit = 1 << (e - 1)
        kept = [mask for mask in self._masks if not mask & bit]
        low = bit - 1
        new = [(mask & low) | ((mask >> 1) & ~low) for mask in kept]
        return Matroid(self.m - 1, self.rank,
                       [_mask_to_subset(mask) for mask in new],
                       validate=False)

    def contract(self, e: int) -> Matroid:
        """Contract a non-loop element; survivors are relabeled to 1..m-1."""
        self._check_element(e)
        if e in self.loops():
            raise DegenerateMinorError(
                f"contracting loop {e} is undefined; not supported")
        bit = 1 << (e - 1)
        kept = [mask ^ bit for mask in self._masks if mask & bit]
        low = bit - 1
        new = [(mask & low) | ((mask >> 1) & ~low) for mask in kept]
        return Matroid(self.m - 1, self.rank - 1,
                       [_mask_to_subset(mask) for mask in new],
                       validate=False)

    def dual(self) -> Matroid:
        full = (1 << self.m) - 1
        return Matroid(self.m, self.m - self.rank,
                       [_mask_to_subset(full ^ mask) for mask in self._masks],
                       validate=False)

    def relabeled(self, perm: Sequence[int]) -> Matroid:
        """Apply a ground-set permutation: element i maps to perm[i-1]."""
        if sorted(perm) != list(range(1, self.m + 1)):
            raise ValueError("perm is not a permutation of the ground set")
        new_masks = []
        for mask in self._masks:
            out = 0
            for i in range(self.m):
                if mask >> i & 1:
                    out |= 1 << (perm[i] - 1)
            new_masks.append(out)
        return Matroid(self.m, self.rank,
                       [_mask_to_subset(mask) for mask in new_masks],
                       validate=False)

    def remove_as_loop(self, e: int) -> Matroid:
        """Drop every basis containing e, keeping the labeling (e becomes a loop)."""
        self._check_element(e)
        bit = 1 << (e - 1)
        kept = [mask for mask in self._masks if not mask & bit]
        if not kept:
            raise DegenerateMinorError(f"element {e} is a coloop; nothing remains")
        return Matroid(self.m, self.rank,
                       [_mask_to_subset(mask) for mask in kept],
                       validate=False)

    def strip_absent(self) -> tuple[Matroid, dict[int, int]]:
        """Remove loops, compressing labels order-preservingly.

        Returns the loop-free matroid and the old->new label map for the
        surviving elements.
        """
        loops = set(self.loops())
        if not loops:
            return self, {e: e for e in range(1, self.m + 1)}
        survivors = [e for e in range(1, self.m + 1) if e not in loops]
        mapping = {old: new for new, old in enumerate(survivors, start=1)}
        bases = [tuple(mapping[x] for x in _mask_to_subset(mask))
                 for mask in self._masks]
        return Matroid(len(survivors), self.rank, bases, name=self.name,
                       validate=False), mapping

    def _check_element(self, e: int) -> None:
        if not 1 <= e <= self.m:
            raise ValueError(f"element {e} outside ground set 1..{self.m}")

    # -- basis-generating polynomial -----------------------------------------

    def basis_polynomial(self) -> Polynomial:
        return Polynomial.from_monomials(
            self.m, ((_mask_to_subset(mask), 1) for mask in self._masks))

    # -- isomorphism -----------------------------------------------------------

    def _invariant_fingerprint(self) -> tuple:
        degs = sorted(self.element_degree(e) for e in range(1, self.m + 1))
        pair_profile = sorted(
            self._pair_degree(e, f)
            for e, f in combinations(range(1, self.m + 1), 2))
        return (self.m, self.rank, len(self._masks), tuple(degs),
                tuple(pair_profile))

    def is_isomorphic(self, other: Matroid) -> tuple[int, ...] | None:
        """Lexicographically least permutation mapping self onto other, or None.

        The returned perm maps element i of self to perm[i-1] of other and
        sends bases onto bases exactly.
        """
        if (self.m, self.rank, len(self._masks)) != \
                (other.m, other.rank, len(other._masks)):
            return None
        if self._invariant_fingerprint() != other._invariant_fingerprint():
            return None
        m = self.m
        assignment = [0] * m        # assignment[i] = image of element i+1
        used = [False] * (m + 1)

        def compatible(i: int, b: int) -> bool:
            if self.element_degree(i + 1) != other.element_degree(b):
                return False
            for j in range(i):
                if self._pair_degree(i + 1, j + 1) != \
                        other._pair_degree(b, assignment[j]):
                    return False
            return True

        def backtrack(i: int) -> bool:
            if i == m:
                mapped = set()
                for mask in self._masks:
                    out = 0
                    for k in range(m):
                        if mask >> k & 1:
                            out |= 1 << (assignment[k] - 1)
                    mapped.add(out)
                return mapped == set(other._mask_set)
            for b in range(1, m + 1):
                if used[b] or not compatible(i, b):
                    continue
                assignment[i] = b
                used[b] = True
                if backtrack(i + 1):
                    return True
                used[b] = False
            return False

        if backtrack(0):
            return tuple(assignment)
        return None

    # -- canonical key ----------------------------------------------------------

    def canonical_key(self) -> tuple:
        """Key identifying the isomorphism class (exact for m <= 8).

        For m <= 8 this is the lexicographically least relabeled sorted
        basis-mask tuple over all ground-set permutations; isomorphic
        matroids share it.  For larger m the exact sorted basis tuple is
        used instead, which is sound for memoization but only unifies
        identically-labeled minors.
        """
        if self._canonical is None:
            if self.m <= 8:
                key = (self.m, self.rank, _min_basis_image(self))
            else:
                key = (self.m, self.rank, self._masks)
            self._canonical = key
        return self._canonical


def _min_basis_image(M: Matroid) -> tuple[int, ...]:
    """Branch-and-bound minimum of the sorted relabeled basis-mask tuple.

    New labels are assigned one at a time; once the first k elements are
    placed, the relabeled masks of bases inside them are final and smaller
    than every remaining mask (2^k bounds them), so prefix comparison
    against the incumbent prunes whole subtrees.
    """
    m = M.m
    masks = M.basis_masks()

    best: list[int] | None = None

    # chosen[k] = old element index (0-based) receiving new label k+1
    def relabel_full(order: list[int]) -> list[int]:
        pos = [0] * m
        for new, old in enumerate(order):
            pos[old] = new
        out = []
        for mask in masks:
            v = 0
            for i in range(m):
                if mask >> i & 1:
                    v |= 1 << pos[i]
            out.append(v)
        out.sort()
        return out

    def descend(order: list[int], remaining: list[int], prefix: list[int]) -> None:
        nonlocal best
        k = len(order)
        if best is not None:
            # prefix entries are final; compare against incumbent
            for i, v in enumerate(prefix):
                if v < best[i]:
                    break
                if v > best[i]:
                    return
            else:
                # equal so far; if the incumbent has more small masks, any
                # completion here is larger
                if len(prefix) < len(best) and k < m and best[len(prefix)] < (1 << k):
                    return
        if k == m:
            cand = relabel_full(order)
            if best is None or cand < best:
                best = cand
            return
        assigned_mask = 0
        for old in order:
            assigned_mask |= 1 << old
        for old in remaining:
            newbit = 1 << old
            inside = assigned_mask | newbit
            completed = []
            pos = {o: i for i, o in enumerate(order)}
            pos[old] = k
            for mask in masks:
                if mask & newbit and mask & ~inside == 0:
                    v = 0
                    for i in range(m):
                        if mask >> i & 1:
                            v |= 1 << pos[i]
                    completed.append(v)
            completed.sort()
            descend(order + [old], [o for o in remaining if o != old],
                    _merge_sorted(prefix, completed))

    # seed the incumbent with the identity labeling for early pruning
    best = relabel_full(list(range(m)))
    descend([], list(range(m)), [])
    assert best is not None
    return tuple(best)


def _merge_sorted(a: list[int], b: list[int]) -> list[int]:
    if not b:
        return a
    out = list(a)
    out.extend(b)
    # b's entries all exceed a's (higher top bit), so appending keeps order
    return out


# -- labeling search -------------------------------------------------------

def _variable_signature(p: Polynomial, v: int) -> tuple:
    """Relabeling-invariant signature of variable v inside p."""
    entries = []
    i = v - 1
    for exps, coeff in p.terms.items():
        if exps[i]:
            entries.append((exps[i], coeff, sum(exps), tuple(sorted(exps))))
    return tuple(sorted(entries))


def find_labeling(M: Matroid, pair: tuple[int, int],
                  target_delta: Polynomial) -> tuple[int, ...] | None:
    """Search for a relabeling of M whose Rayleigh difference at `pair`
    equals target_delta exactly.

    Returns a ground-set permutation (element i of M maps to perm[i-1]) or
    None.  The search tries unordered element pairs of M as preimages of
    `pair`, prunes with relabeling-invariant statistics, then matches the
    remaining variables by signature classes; every candidate is verified
    by exact polynomial comparison before being returned.
    """
    e0, f0 = pair
    if e0 == f0:
        raise ValueError("pair must consist of two distinct indices")
    if target_delta.m != M.m:
        return None
    Z = M.basis_polynomial()
    m = M.m
    tgt_nterms = target_delta.num_terms()
    tgt_deg = target_delta.total_degree()
    tgt_coeffs = sorted(target_delta.terms.values())
    tgt_eval = target_delta.eval_rational([1] * m)
    others_t = [v for v in range(1, m + 1) if v not in (e0, f0)]
    sig_t = {v: _variable_signature(target_delta, v) for v in others_t}

    candidates: list[tuple[int, ...]] = []
    for a, b in combinations(range(1, m + 1), 2):
        delta = rayleigh_diff_multiaffine(Z, a, b)
        if delta.num_terms() != tgt_nterms or delta.total_degree() != tgt_deg:
            continue
        if sorted(delta.terms.values()) != tgt_coeffs:
            continue
        if delta.eval_rational([1] * m) != tgt_eval:
            continue
        others_s = [v for v in range(1, m + 1) if v not in (a, b)]
        sig_s = {v: _variable_signature(delta, v) for v in others_s}
        # group target slots by signature
        slots: dict[tuple, list[int]] = {}
        for v in others_t:
            slots.setdefault(sig_t[v], []).append(v)
        pools = {sig: sorted(vs) for sig, vs in slots.items()}
        ok_shape = True
        from collections import Counter
        if Counter(sig_s.values()) != Counter(sig_t.values()):
            ok_shape = False
        if not ok_shape:
            continue

        source = sorted(others_s)

        def assign(idx: int, mapping: dict[int, int], used: set[int]) -> None:
            if idx == len(source):
                for pa, pb in ((e0, f0), (f0, e0)):
                    perm = [0] * m
                    perm[a - 1] = pa
                    perm[b - 1] = pb
                    for src, dst in mapping.items():
                        perm[src - 1] = dst
                    if delta.permuted(perm) == target_delta:
                        candidates.append(tuple(perm))
                return
            v = source[idx]
            for w in pools[sig_s[v]]:
                if w in used:
                    continue
                mapping[v] = w
                used.add(w)
                assign(idx + 1, mapping, used)
                used.discard(w)
                del mapping[v]

        assign(0, {}, set())

    if not candidates:
        return None
    best = min(candidates)
    # independent re-verification on the matroid side
    relabeled = M.relabeled(best)
    check = rayleigh_diff_multiaffine(relabeled.basis_polynomial(), e0, f0)
    if check != target_delta:
        raise RuntimeError("internal error: labeling candidate failed re-verification")
    return best


# -- file format -------------------------------------------------------------

def matroid_to_text(M: Matroid) -> str:
    """Canonical JSON serialization.

    Uses whichever of bases/nonbases is shorter (ties go to bases); subsets
    are sorted lexicographically.
    """
    bases = [list(b) for b in M.bases()]
    all_count = _binomial(M.m, M.rank)
    payload: dict = {}
    if M.name is not None:
        payload["name"] = M.name
    payload.update({"m": M.m, "rank": M.rank})
    if all_count - len(bases) < len(bases):
        basis_set = {tuple(b) for b in bases}
        nonbases = [list(c) for c in combinations(range(1, M.m + 1), M.rank)
                    if c not in basis_set]
        payload["nonbases"] = sorted(nonbases)
    else:
        payload["bases"] = sorted(bases)
    return json.dumps(payload, indent=2) + "\n"


def matroid_from_text(text: str) -> Matroid:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatroidParseError(f"invalid matroid file: {exc}") from exc
    if not isinstance(payload, dict):
        raise MatroidParseError("matroid file must contain a JSON object")
    try:
        m = int(payload["m"])
        rank = int(payload["rank"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MatroidParseError("matroid file needs integer 'm' and 'rank'") from exc
    name = payload.get("name")
    if "bases" in payload:
        return Matroid.from_bases(m, rank, payload["bases"], name=name)
    if "nonbases" in payload:
        return Matroid.from_nonbases(m, rank, payload["nonbases"], name=name)
    raise MatroidParseError("matroid file needs either 'bases' or 'nonbases'")


def _binomial(n: int, k: int) -> int:
    from math import comb
    return comb(n, k)


def minor_relabel_map(m: int, removed: int) -> dict[int, int]:
    """Order-preserving label map used by delete/contract: {1..m}\\{removed} -> 1..m-1."""
    return {e: (e if e < removed else e - 1)
            for e in range(1, m + 1) if e != removed}
