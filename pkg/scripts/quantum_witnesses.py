"""Witness expectations on the GHZ history state and odd-d eigenvalue checks."""
import argparse

from temporal_ghz.quantum import (
    ghz_history_state,
    odd_dimension_nogo_check,
    temporal_witness_family,
    verify_ghz_paradox,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--odd-d", type=int, nargs="+", default=[3, 5, 7])
    args = ap.parse_args()
    for m in args.m:
        words = temporal_witness_family(m)
        rep = verify_ghz_paradox(ghz_history_state(m), words)
        vals = " ".join(f"{z.real:+.0f}" for z in rep.eigenvalues)
        print(f"m={m}: {len(words)} witnesses, values {vals}, paradox={rep.is_paradox}")
    for d in args.odd_d:
        rep = odd_dimension_nogo_check(d, 2, 20)
        print(
            f"d={d}: {rep.words_checked} words, -1 found={rep.minus_one_found}, "
            f"max root distance={rep.max_root_distance:.1e}"
        )


if __name__ == "__main__":
    main()
