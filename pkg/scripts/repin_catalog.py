#!/usr/bin/env python3
"""Re-derive the catalog pinning permutations from scratch.

For each certificated entry, searches for a relabeling of the
construction-labeled (literature) matroid whose Rayleigh difference at the
certificate pair equals the shipped certificate's expansion exactly, and
compares the result against the pins committed in hppcheck.catalog.

Run after changing a catalog construction or a shipped certificate:

    python3 scripts/repin_catalog.py
"""

import sys

from hppcheck.catalog import (CERT_PAIRS, entry, literature_definition,
                              pin_permutation)
from hppcheck.certificate import shipped_store
from hppcheck.matroid import find_labeling
from hppcheck.rayleigh import rayleigh_diff_multiaffine


def main() -> int:
    store = shipped_store()
    ok = True
    for name, pair in sorted(CERT_PAIRS.items()):
        cert = store.lookup(name, pair)
        if cert is None:
            print(f"{name}: MISSING certificate for pair {pair}")
            ok = False
            continue
        target = cert.expand(entry(name).matroid.m)
        lit = literature_definition(name)
        perm = find_labeling(lit, pair, target)
        if perm is None:
            print(f"{name}: no relabeling matches the certificate target")
            ok = False
            continue
        pinned = lit.relabeled(perm)
        current = entry(name).matroid
        status = "matches catalog" if pinned.basis_masks() == \
            current.basis_masks() else "DIFFERS from catalog"
        try:
            committed = pin_permutation(name)
        except KeyError:
            committed = None   # derived entries (nP_d1, nP_d9) pin through nP
        print(f"{name}: pin {perm} ({status}; committed {committed})")
        check = rayleigh_diff_multiaffine(pinned.basis_polynomial(), *pair)
        if check != target:
            print(f"{name}: re-verification FAILED")
            ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
