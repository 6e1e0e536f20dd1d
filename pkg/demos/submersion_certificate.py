"""Exact elimination for biharmonic submersions: the identity chain, the
degree-7 polynomial and the fate of each of its roots."""
from fractions import Fraction

from bergersphere.submersion import case_exclusions, eliminate_and_bound, identity_chain


def main():
    rep = identity_chain("symbolic")
    print("identity chain over symbolic eps:")
    for s in rep.steps:
        flag = "" if s.status == "verified" else f"   <- typeset form disagrees ({s.method})"
        print(f"  {s.step_id:<24} {s.status}{flag}")

    cert = eliminate_and_bound("symbolic", with_chain=False)
    print("\nsymbolic eliminant, highest power first:")
    for k, c in zip(range(cert.degree, -1, -1), cert.coefficient_list()):
        print(f"  sigma^{k}: {c}")

    for eps in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(3, 2)):
        cert = eliminate_and_bound(eps, with_chain=False)
        cases = case_exclusions(eps)
        print(f"\neps = {eps}: conclusion {cert.conclusion}, Case II (a3)^2 = {cases.case_two_a3_squared}")
        for v in cert.roots:
            print(f"  sigma = {v.sigma.real:+.6f}{v.sigma.imag:+.6f}i  excluded by: {v.reason}")


if __name__ == "__main__":
    main()
