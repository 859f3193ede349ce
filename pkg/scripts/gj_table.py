"""Tabulate embedding classes and +-1 coset counts for P(2,2,-(1+l^2))."""

from pretzel_chi.classifier import classify
from pretzel_chi.d_obstruction import coset_count_pm1
from pretzel_chi.lattice_embed import find_embeddings, structural_check
from pretzel_chi.plumbing import build_plumbing, intersection_form
from pretzel_chi.pretzel_core import format_params


def main() -> None:
    print(f"{'link':16s} {'verdict':26s} classes (k, count/|det At|)")
    for lam in range(1, 8):
        p = (2, 2, -(1 + lam * lam))
        g = build_plumbing(p)
        Q = intersection_form(g)
        rows = []
        for e in find_embeddings(Q):
            r = coset_count_pm1(e, early_exit=False)
            rows.append(f"({structural_check(e, Q, g).k}, {r.count}/{r.det_abs})")
        v = classify(p)
        print(f"{format_params(p):16s} {v.status.value + ' ' + v.rule:26s} {' '.join(rows)}")


if __name__ == "__main__":
    main()
