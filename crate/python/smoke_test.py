#!/usr/bin/env python3
"""Smoke test for the qekr_py extension module.

Build the module first, then run this script:

    cargo build -p qekr-py
    python3 python/smoke_test.py
"""

import json
import sys
from importlib.machinery import ExtensionFileLoader
from importlib.util import module_from_spec, spec_from_loader
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libqekr_py.so", "qekr_py.so", "libqekr_py.dylib")
    ]
    for so in candidates:
        if so.exists():
            loader = ExtensionFileLoader("qekr_py", str(so))
            spec = spec_from_loader("qekr_py", loader)
            mod = module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("qekr_py cdylib not found; run `cargo build -p qekr-py` first")


def main():
    qekr = load_module()

    # Exact counts.
    assert qekr.gaussian(4, 2, 2) == 35
    assert qekr.theta(3, 2) == 15
    assert qekr.count_disjoint(3, 0, 1, 2) == 28
    assert qekr.size_pencil(2, 4, 2, 1) == 7
    assert qekr.gaussian(40, 20, 5) > 10**190  # arbitrary precision

    # Example sizes in all printed forms.
    assert qekr.size_example("P1", "closed", 2, 6, 3, 1) == 115
    assert qekr.size_example("P1", "sum", 2, 6, 3, 1) == 115
    assert qekr.size_example("A1", "closed", 2, 6, 3, 1) == 99
    assert qekr.size_example("A1", "closed", 3, 6, 3, 1) == 508
    assert qekr.size_example("A2", "closed", 3, 6, 3, 1) == 508

    # Threshold and its attained branch.
    value, branch = qekr.hm_threshold("pg", 3, 8, 4, 1)
    assert value == qekr.size_example("P2", "closed", 3, 8, 4, 1)
    assert branch == "P2"
    value, branch = qekr.hm_threshold("pg", 3, 14, 6, 1)
    assert branch == "P1"

    # Construction agrees with the closed form; JSON round-trips.
    fam = qekr.make_example("P2", 2, 4, 2, 1)
    assert len(fam) == 15
    assert fam.space == "PG" and fam.q == 2 and fam.n == 4 and fam.k == 2
    doc = json.loads(fam.to_json())
    assert len(doc["subspaces"]) == 15
    back = qekr.family_from_json(fam.to_json())
    assert back.members() == fam.members()

    # Predicates and cover analysis.
    holds, witness = fam.is_pairwise_t_intersecting(1)
    assert holds and witness is None
    holds, extension = fam.is_maximal(1)
    assert holds and extension is None
    psi, covers = fam.cover_analysis(1)
    assert psi == 2 and len(covers) == 15

    pencil = qekr.make_pencil("pg", 2, 4, 2, 1)
    assert len(pencil) == qekr.size_pencil(2, 4, 2, 1)
    psi, covers = pencil.cover_analysis(1)
    assert psi == 1

    # Search oracles.
    size, optimal, witness = qekr.max_clique("ag", 2, 3, 1, 0)
    assert size == 7 and optimal and len(witness) == 7
    histogram, max_size, witnesses = qekr.second_largest_probe(
        "ag", 2, 2, 1, 0, seeds="exhaustive"
    )
    assert max_size == 3
    assert all(span_dim == 2 for _, span_dim, _ in witnesses)

    # Lemma lab.
    verdicts = qekr.check_lemma("L47", 2, 4, 2, 1)
    assert len(verdicts) == 1 and verdicts[0]["holds"]
    verdicts = qekr.check_lemma("AVERSCHIL3", 3, 6, 3, 1)
    main = next(v for v in verdicts if v["check"] == "main")
    assert main["lhs"] == main["rhs"] == (508, 1)
    verdicts, summary = qekr.run_grid(
        "L47", "q=2..3,t=1..2,k=t+1..t+4,n=2k-t+1..2k+6"
    )
    assert summary["failed"] == 0 and summary["tuples"] == len(verdicts)

    print("smoke test PASS:", len(dir(qekr)), "module attributes exercised")


if __name__ == "__main__":
    main()
