"""Recursive strong-Rayleigh verification for matroid basis polynomials.

A matroid's basis polynomial is strongly Rayleigh iff every one-element
contraction and deletion is, and some single pair has a globally
nonnegative Rayleigh difference.  The checker runs that recursion with:

  * base facts imported from the literature (at most six elements; rank or
    corank at most two; specific catalog matroids known to have the
    half-plane property), all flagged with provenance;
  * exact certificate verification (via the certificate store) or exact
    re-verified SOS search for the pair condition;
  * isomorphism resolution against the catalog, including duals (the class
    is closed under duality);
  * a falsifier producing exact rational counterexamples in refute mode.

PROVED / REFUTED / INCONCLUSIVE are first-class verdicts; sampling never
proves, and the float SOS stage never reaches a verdict without exact
rational re-verification.  Reports are machine-checkable trees; see
`replay_report`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from hppcheck import sampler as sampler_mod
from hppcheck import sos_search as sos_mod
from hppcheck.catalog import CATALOG_NAMES, catalog, entry
from hppcheck.certificate import CertificateStore, SosCertificate, verify
from hppcheck.matroid import Matroid
from hppcheck.polynomial import format_polynomial
from hppcheck.rayleigh import rayleigh_diff_multiaffine

PROVED = "PROVED"
REFUTED = "REFUTED"
INCONCLUSIVE = "INCONCLUSIVE"

_PROV_SMALL = "imported fact: every matroid with at most six elements has the HPP"
_PROV_RANK = "imported fact: every matroid with rank or corank at most two has the HPP"
_PROV_KNOWN = "imported fact: this catalog matroid is known to have the HPP"
_PROV_DUAL = "imported fact: the HPP class is closed under duality"
_LOOP_NOTE = ("variables absent from the polynomial (loops) are treated as "
              "allowed: their Rayleigh differences vanish identically")


@dataclass
class CheckOptions:
    use_store: bool = True
    search: bool = False
    refute: bool = False
    seed: int = 0
    search_tolerance: float = 1e-9
    search_max_iterations: int = 50_000
    search_denominator_bound: int = 1 << 16
    search_denominator_cap: int = 1 << 32
    refute_trials: int = 100_000
    refute_restarts: int = 50
    refute_steps: int = 500


@dataclass
class CheckReport:
    verdict: str
    matroid_name: str
    m: int
    rank: int
    num_bases: int
    justification: dict[str, Any]
    children: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        just = dict(self.justification)
        if "inner" in just and isinstance(just["inner"], CheckReport):
            just["inner"] = just["inner"].to_dict()
        kids = []
        for child in self.children:
            c = dict(child)
            if isinstance(c.get("report"), CheckReport):
                c["report"] = c["report"].to_dict()
            kids.append(c)
        return {"verdict": self.verdict, "matroid": self.matroid_name,
                "m": self.m, "rank": self.rank, "bases": self.num_bases,
                "justification": just, "children": kids, "notes": self.notes}

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        kind = self.justification.get("kind", "?")
        lines = [f"{pad}{self.verdict} {self.matroid_name} "
                 f"(m={self.m}, rank={self.rank}, bases={self.num_bases}) "
                 f"via {kind}"]
        detail = _describe_justification(self.justification)
        if detail:
            lines.append(f"{pad}  {detail}")
        for note in self.notes:
            lines.append(f"{pad}  note: {note}")
        inner = self.justification.get("inner")
        if isinstance(inner, CheckReport):
            lines.append(inner.render(indent + 1))
        for child in self.children:
            lines.append(f"{pad}  {child['op']} {child['element']}:")
            lines.append(child["report"].render(indent + 2))
        return "\n".join(lines)


def _describe_justification(just: dict[str, Any]) -> str:
    kind = just.get("kind")
    if kind == "base_fact":
        return just.get("provenance", "")
    if kind == "known_hpp":
        via = "dual of " if just.get("dual") else ""
        return (f"isomorphic to {via}catalog {just['catalog']}; "
                f"{just.get('provenance', '')}")
    if kind == "certificate":
        return (f"pair {tuple(just['pair'])} via certificate for "
                f"{just['catalog']}")
    if kind == "sos_search":
        return f"pair {tuple(just['pair'])} via searched certificate"
    if kind == "dual_of":
        return f"dual of catalog {just['catalog']}"
    if kind == "counterexample":
        return (f"pair {tuple(just['pair'])} negative at "
                f"{just['point']} (value {just['value']})")
    if kind == "reduction":
        return (f"loops {just.get('loops')} / coloops {just.get('coloops')} "
                f"removed")
    if kind == "minor_refuted":
        return f"{just['op']} {just['element']} is already refuted"
    if kind == "isomorphic":
        return "isomorphic to an already-checked minor"
    return ""


class StrongRayleighChecker:
    """Runs the recursion with memoization keyed on canonical minor keys."""

    def __init__(self, store: CertificateStore, options: CheckOptions | None = None):
        self.store = store
        self.options = options or CheckOptions()
        self._memo: dict[tuple, tuple[Matroid, CheckReport]] = {}
        self._active: set[tuple] = set()
        self._verified_entry_pairs: dict[tuple[str, tuple[int, int]], bool] = {}
        # catalog cores: entry name -> (loop-free matroid, known_hpp)
        self._cores: dict[str, Matroid] = {}
        for name in CATALOG_NAMES:
            ent = entry(name)
            core, _ = ent.matroid.strip_absent()
            self._cores[name] = core

    # -- public API -----------------------------------------------------

    def check(self, M: Matroid, name: str | None = None) -> CheckReport:
        report = self._check(M, name)
        assert report is not None
        return report

    # -- internals --------------------------------------------------------

    def _check(self, M: Matroid, name: str | None = None) -> CheckReport | None:
        key = M.canonical_key()
        hit = self._memo.get(key)
        if hit is not None:
            rep_matroid, report = hit
            if rep_matroid == M:
                return report
            # same isomorphism class, different labels: reuse the stored
            # tree under the witnessing permutation (recorded for replay)
            perm = M.is_isomorphic(rep_matroid)
            assert perm is not None, "canonical keys disagree with isomorphism"
            return CheckReport(
                verdict=report.verdict, matroid_name=self._display_name(M, name),
                m=M.m, rank=M.rank, num_bases=M.num_bases(),
                justification={"kind": "isomorphic", "perm": list(perm),
                               "inner": report})
        if key in self._active:
            return None
        self._active.add(key)
        try:
            report = self._check_core(M, name)
        finally:
            self._active.discard(key)
        if report is not None:
            self._memo[key] = (M, report)
        return report

    def _display_name(self, M: Matroid, name: str | None) -> str:
        if name:
            return name
        if M.name:
            return M.name
        return f"minor(m={M.m},r={M.rank},b={M.num_bases()})"

    def _check_core(self, M: Matroid, name: str | None) -> CheckReport | None:
        disp = self._display_name(M, name)

        loops = M.loops()
        coloops = M.coloops()
        if loops or coloops:
            reduced = M
            if loops:
                reduced, _ = reduced.strip_absent()
            for c in sorted(reduced.coloops(), reverse=True):
                reduced = reduced.contract(c)
            inner = self._check(reduced)
            if inner is None:
                return None
            notes = []
            if loops:
                notes.append(_LOOP_NOTE)
            if coloops:
                notes.append("coloop factors y_e*(rest) do not affect "
                             "strong-Rayleighness")
            return CheckReport(
                verdict=inner.verdict, matroid_name=disp, m=M.m, rank=M.rank,
                num_bases=M.num_bases(),
                justification={"kind": "reduction", "loops": list(loops),
                               "coloops": list(coloops), "inner": inner},
                notes=notes)

        base = self._base_fact(M, disp)
        if base is not None:
            return base

        dual_res = self._dual_resolution(M, disp)
        if dual_res is not None:
            return dual_res

        return self._recursion(M, disp)

    def _base_fact(self, M: Matroid, disp: str) -> CheckReport | None:
        def report(just: dict[str, Any]) -> CheckReport:
            return CheckReport(verdict=PROVED, matroid_name=disp, m=M.m,
                               rank=M.rank, num_bases=M.num_bases(),
                               justification=just)

        if M.m <= 6:
            return report({"kind": "base_fact", "fact": "ground_at_most_6",
                           "provenance": _PROV_SMALL})
        if M.rank <= 2 or M.corank() <= 2:
            return report({"kind": "base_fact", "fact": "rank_or_corank_at_most_2",
                           "provenance": _PROV_RANK})
        for ename in CATALOG_NAMES:
            ent = entry(ename)
            if not ent.known_hpp:
                continue
            core = self._cores[ename]
            perm = M.is_isomorphic(core)
            if perm is not None:
                return report({"kind": "known_hpp", "catalog": ename,
                               "perm": list(perm), "dual": False,
                               "provenance": _PROV_KNOWN})
            perm = M.is_isomorphic(core.dual())
            if perm is not None:
                return report({"kind": "known_hpp", "catalog": ename,
                               "perm": list(perm), "dual": True,
                               "provenance": _PROV_KNOWN + "; " + _PROV_DUAL})
        return None

    def _dual_resolution(self, M: Matroid, disp: str) -> CheckReport | None:
        """M isomorphic to the dual of a certificated catalog core."""
        for ename in CATALOG_NAMES:
            if not self.store.pairs_for(ename) and entry(ename).cert_pair is None:
                continue
            core = self._cores[ename]
            if (M.m, M.rank) != (core.m, core.m - core.rank):
                continue
            perm = M.is_isomorphic(core.dual())
            if perm is None:
                continue
            inner = self._check(core)
            if inner is None or inner.verdict != PROVED:
                continue
            return CheckReport(
                verdict=PROVED, matroid_name=disp, m=M.m, rank=M.rank,
                num_bases=M.num_bases(),
                justification={"kind": "dual_of", "catalog": ename,
                               "perm": list(perm), "inner": inner,
                               "provenance": _PROV_DUAL})
        return None

    def _recursion(self, M: Matroid, disp: str) -> CheckReport | None:
        children: list[dict[str, Any]] = []
        refuted_child: dict[str, Any] | None = None
        inconclusive = False
        for e in range(1, M.m + 1):
            for op, minor in (("contract", M.contract(e)), ("delete", M.delete(e))):
                rep = self._check(minor)
                if rep is None:
                    return None
                children.append({"op": op, "element": e, "report": rep})
                if rep.verdict == REFUTED and refuted_child is None:
                    refuted_child = children[-1]
                elif rep.verdict != PROVED:
                    inconclusive = True

        if refuted_child is not None:
            lifted = self._lift_counterexample(M, refuted_child)
            if lifted is not None:
                return CheckReport(verdict=REFUTED, matroid_name=disp, m=M.m,
                                   rank=M.rank, num_bases=M.num_bases(),
                                   justification=lifted, children=children)
            return CheckReport(
                verdict=REFUTED, matroid_name=disp, m=M.m, rank=M.rank,
                num_bases=M.num_bases(),
                justification={"kind": "minor_refuted",
                               "op": refuted_child["op"],
                               "element": refuted_child["element"]},
                children=children)

        evidence = None
        if not inconclusive:
            evidence = self._pair_evidence(M)
            if evidence is not None:
                return CheckReport(verdict=PROVED, matroid_name=disp, m=M.m,
                                   rank=M.rank, num_bases=M.num_bases(),
                                   justification=evidence, children=children)

        if self.options.refute:
            counter = self._falsify(M)
            if counter is not None:
                return CheckReport(verdict=REFUTED, matroid_name=disp, m=M.m,
                                   rank=M.rank, num_bases=M.num_bases(),
                                   justification=counter, children=children)

        reason = ("a minor is inconclusive" if inconclusive else
                  "no pair with certified nonnegativity was found")
        return CheckReport(verdict=INCONCLUSIVE, matroid_name=disp, m=M.m,
                           rank=M.rank, num_bases=M.num_bases(),
                           justification={"kind": "none", "reason": reason},
                           children=children)

    # -- pair nonnegativity -------------------------------------------------

    def _entry_isomorphism(self, M: Matroid) -> tuple[str, tuple[int, ...]] | None:
        """Catalog entry whose loop-free core is isomorphic to M."""
        for ename in CATALOG_NAMES:
            if not self.store.pairs_for(ename):
                continue
            core = self._cores[ename]
            perm = M.is_isomorphic(core)
            if perm is not None:
                return ename, perm
        return None

    def _verify_entry_pair(self, ename: str, pair: tuple[int, int]) -> bool:
        key = (ename, tuple(sorted(pair)))
        if key not in self._verified_entry_pairs:
            cert = self.store.lookup(ename, pair)
            if cert is None:
                self._verified_entry_pairs[key] = False
            else:
                mat = entry(ename).matroid
                target = rayleigh_diff_multiaffine(mat.basis_polynomial(), *pair)
                self._verified_entry_pairs[key] = bool(verify(cert, target))
        return self._verified_entry_pairs[key]

    def check_pair_nonnegativity(self, M: Matroid,
                                 pair: tuple[int, int] | None = None) -> dict | None:
        """Evidence that some (or the given) pair difference is globally
        nonnegative: a verified store certificate or a searched one.

        Sampling can never establish nonnegativity, so absence of evidence
        returns None (INCONCLUSIVE at the call site).
        """
        if pair is None:
            return self._pair_evidence(M)
        return self._pair_evidence(M, only_pair=pair)

    def _pair_evidence(self, M: Matroid,
                       only_pair: tuple[int, int] | None = None) -> dict | None:
        if self.options.use_store:
            resolved = self._entry_isomorphism(M)
            if resolved is not None:
                ename, perm = resolved
                ent = entry(ename)
                core = self._cores[ename]
                # strip map of the entry: core label -> entry label
                _, strip_map = ent.matroid.strip_absent()
                inv_strip = {new: old for old, new in strip_map.items()}
                for epair in self.store.pairs_for(ename):
                    if not self._verify_entry_pair(ename, epair):
                        continue
                    # entry pair -> core pair -> M pair via perm inverse
                    core_pair = tuple(sorted(strip_map[x] for x in epair))
                    inv = {p: i + 1 for i, p in enumerate(perm)}
                    m_pair = tuple(sorted(inv[x] for x in core_pair))
                    if only_pair is not None and tuple(sorted(only_pair)) != m_pair:
                        continue
                    just = {"kind": "certificate", "catalog": ename,
                            "pair": list(epair), "m_pair": list(m_pair),
                            "perm": list(perm)}
                    if entry(ename).matroid.loops():
                        just["note"] = _LOOP_NOTE
                    return just
        if self.options.search:
            Z = M.basis_polynomial()
            pairs = ([tuple(sorted(only_pair))] if only_pair is not None else
                     [(e, f) for e in range(1, M.m + 1)
                      for f in range(e + 1, M.m + 1)])
            for e, f in pairs:
                target = rayleigh_diff_multiaffine(Z, e, f)
                cert = sos_mod.search_certificate(
                    target,
                    tolerance=self.options.search_tolerance,
                    max_iterations=self.options.search_max_iterations,
                    denominator_bound=self.options.search_denominator_bound,
                    denominator_cap=self.options.search_denominator_cap,
                    seed=self.options.seed)
                if cert is None:
                    continue
                if not verify(cert, target):
                    continue
                return {"kind": "sos_search", "pair": [e, f],
                        "certificate": {
                            "terms": [[str(w), format_polynomial(q)]
                                      for w, q in cert.terms]}}
        return None

    # -- refutation ----------------------------------------------------------

    def _falsify(self, M: Matroid) -> dict | None:
        config = sampler_mod.SampleConfig(
            mode=sampler_mod.STRONG_RAYLEIGH,
            trials=self.options.refute_trials,
            seed=self.options.seed,
            descent=True,
            restarts=self.options.refute_restarts,
            steps=self.options.refute_steps)
        counter = sampler_mod.falsify(M.basis_polynomial(), config)
        if counter is None:
            return None
        return {"kind": "counterexample", "pair": list(counter.pair),
                "point": [_frac_str(x) for x in counter.point],
                "value": _frac_str(counter.value)}

    def _lift_counterexample(self, M: Matroid, child: dict) -> dict | None:
        """Turn a refuted minor's counterexample into one for M itself."""
        rep: CheckReport = child["report"]
        just = rep.justification
        if just.get("kind") != "counterexample":
            return None
        e = child["element"]
        pair_minor = tuple(just["pair"])
        point_minor = [Fraction(s) for s in just["point"]]
        # minor labels -> M labels (order-preserving compression around e)
        def unmap(x: int) -> int:
            return x if x < e else x + 1
        pair_m = tuple(sorted(unmap(x) for x in pair_minor))
        Z = M.basis_polynomial()
        delta = rayleigh_diff_multiaffine(Z, *pair_m)
        base_point: list[Fraction] = []
        it = iter(point_minor)
        for v in range(1, M.m + 1):
            base_point.append(Fraction(0) if v == e else next(it))
        if child["op"] == "delete":
            value = delta.eval_rational(base_point)
            if value < 0:
                return {"kind": "counterexample", "pair": list(pair_m),
                        "point": [_frac_str(x) for x in base_point],
                        "value": _frac_str(value)}
            return None
        # contraction: grow y_e until the leading quadratic term dominates
        for k in range(0, 128):
            pt = list(base_point)
            pt[e - 1] = Fraction(2 ** k)
            value = delta.eval_rational(pt)
            if value < 0:
                return {"kind": "counterexample", "pair": list(pair_m),
                        "point": [_frac_str(x) for x in pt],
                        "value": _frac_str(value)}
        return None


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def check_strong_rayleigh(M: Matroid, store: CertificateStore,
                          options: CheckOptions | None = None,
                          name: str | None = None) -> CheckReport:
    """Run the full recursive check on a matroid."""
    return StrongRayleighChecker(store, options).check(M, name=name)


def resolve_via_isomorphism(M: Matroid) -> tuple[str, tuple[int, ...]] | None:
    """Catalog entry (name, permutation) isomorphic to M after stripping
    the entry's loops, trying direct matches first and then duals.

    The permutation maps elements of M onto the entry's loop-free core.
    """
    for ename in CATALOG_NAMES:
        core, _ = entry(ename).matroid.strip_absent()
        perm = M.is_isomorphic(core)
        if perm is not None:
            return ename, perm
    for ename in CATALOG_NAMES:
        core, _ = entry(ename).matroid.strip_absent()
        perm = M.is_isomorphic(core.dual())
        if perm is not None:
            return ename + "*", perm
    return None


# -- replay ------------------------------------------------------------------


def replay_report(report: CheckReport, M: Matroid,
                  store: CertificateStore) -> bool:
    """Re-verify every justification in a report tree against the matroid.

    Returns True iff the tree is internally consistent: minors recompute,
    base facts hold, permutations map bases onto bases, certificates
    re-verify exactly, and counterexamples re-evaluate negative.
    """
    if (report.m, report.rank, report.num_bases) != (M.m, M.rank, M.num_bases()):
        return False
    just = report.justification
    kind = just.get("kind")

    if kind == "isomorphic":
        inner = just.get("inner")
        if not isinstance(inner, CheckReport) or inner.verdict != report.verdict:
            return False
        try:
            rep_matroid = M.relabeled(tuple(just["perm"]))
        except ValueError:
            return False
        return replay_report(inner, rep_matroid, store)

    if kind == "reduction":
        reduced = M
        if M.loops():
            reduced, _ = reduced.strip_absent()
        for c in sorted(reduced.coloops(), reverse=True):
            reduced = reduced.contract(c)
        inner = just.get("inner")
        if not isinstance(inner, CheckReport) or inner.verdict != report.verdict:
            return False
        return replay_report(inner, reduced, store)

    if kind == "base_fact":
        if just["fact"] == "ground_at_most_6":
            return report.verdict == PROVED and M.m <= 6
        if just["fact"] == "rank_or_corank_at_most_2":
            return report.verdict == PROVED and (M.rank <= 2 or M.corank() <= 2)
        return False

    if kind == "known_hpp":
        ent = entry(just["catalog"])
        if not ent.known_hpp:
            return False
        core, _ = ent.matroid.strip_absent()
        target = core.dual() if just.get("dual") else core
        return _perm_maps(M, tuple(just["perm"]), target)

    if kind == "dual_of":
        ent = entry(just["catalog"])
        core, _ = ent.matroid.strip_absent()
        if not _perm_maps(M, tuple(just["perm"]), core.dual()):
            return False
        inner = just.get("inner")
        if not isinstance(inner, CheckReport) or inner.verdict != PROVED:
            return False
        if not replay_report(inner, core, store):
            return False
        return _replay_children(report, M, store)

    if kind in ("certificate", "sos_search", "none", "counterexample",
                "minor_refuted"):
        if not _replay_children(report, M, store):
            return False
        if kind == "certificate":
            ename = just["catalog"]
            ent = entry(ename)
            core, strip_map = ent.matroid.strip_absent()
            if not _perm_maps(M, tuple(just["perm"]), core):
                return False
            cert = store.lookup(ename, tuple(just["pair"]))
            if cert is None:
                return False
            target = rayleigh_diff_multiaffine(
                ent.matroid.basis_polynomial(), *just["pair"])
            return bool(verify(cert, target)) and report.verdict == PROVED
        if kind == "sos_search":
            from hppcheck.polynomial import parse_polynomial
            pair = tuple(just["pair"])
            target = rayleigh_diff_multiaffine(M.basis_polynomial(), *pair)
            terms = tuple(
                (Fraction(w), parse_polynomial(text, M.m))
                for w, text in just["certificate"]["terms"])
            cert = SosCertificate(terms=terms)
            return bool(verify(cert, target)) and report.verdict == PROVED
        if kind == "counterexample":
            pair = tuple(just["pair"])
            point = [Fraction(s) for s in just["point"]]
            value = Fraction(just["value"])
            delta = rayleigh_diff_multiaffine(M.basis_polynomial(), *pair)
            return (report.verdict == REFUTED and value < 0
                    and delta.eval_rational(point) == value)
        if kind == "minor_refuted":
            return report.verdict == REFUTED
        # kind == "none"
        return report.verdict == INCONCLUSIVE

    return False


def _perm_maps(M: Matroid, perm: tuple[int, ...], target: Matroid) -> bool:
    if len(perm) != M.m or target.m != M.m:
        return False
    try:
        return M.relabeled(perm) == target
    except ValueError:
        return False


def _replay_children(report: CheckReport, M: Matroid,
                     store: CertificateStore) -> bool:
    if not report.children:
        return True
    seen: set[tuple[str, int]] = set()
    for child in report.children:
        op, e = child["op"], child["element"]
        seen.add((op, e))
        minor = M.contract(e) if op == "contract" else M.delete(e)
        if not replay_report(child["report"], minor, store):
            return False
    expected = {(op, e) for e in range(1, M.m + 1)
                for op in ("contract", "delete")}
    return seen == expected
