"""Coefficient tables for the three zeta kernels and the prime zeta kernel.

Prints a_n and c_n next to their closed forms (ordered factorizations,
von Mangoldt, squarefree indicator) and the growth-certificate summary.

    python scripts/zeta_families.py --show 30 --depth 10000
"""

import argparse

from pickdirichlet import FamilyId, Mode, check_complete_pick, family_coefficients, growth_certificate
from pickdirichlet import oracles


def closed_form(family: FamilyId, n: int) -> str:
    if family is FamilyId.ZETA_RECIPROCAL:
        return f"H(n)={oracles.ordered_factorization_count(n)}"
    if family is FamilyId.ZETA_LOGDERIV:
        return f"-Lambda={-oracles.von_mangoldt(n):.6f}"
    if family is FamilyId.ZETA_SQUAREFREE:
        return f"-sqfree={-int(oracles.is_squarefree(n)) if n > 1 else 1}"
    return ""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=10_000)
    ap.add_argument("--show", type=int, default=24)
    args = ap.parse_args()

    for family in FamilyId:
        mode = Mode.EXACT_RATIONAL if family in (FamilyId.ZETA_RECIPROCAL, FamilyId.ZETA_SQUAREFREE) else Mode.REAL64
        spec = family_coefficients(family, args.depth, mode)
        verdict = check_complete_pick(spec)
        report = growth_certificate(spec, n_max=20)
        print(f"== {family.value} ({mode.value}, depth {spec.depth})")
        print(f"   complete Pick on prefix: {verdict.is_complete_pick}; "
              f"growth pairs {len(report.pairs)}, identity rows {report.identity_checked}, "
              f"failures {len(report.failures)}")
        for n in range(1, args.show + 1):
            a, c = spec.a.coeff(n), spec.inverse.coeff(n)
            print(f"   n={n:>3}  a_n={float(a):>14.6g}  c_n={float(c):>10.6f}  {closed_form(family, n)}")


if __name__ == "__main__":
    main()
