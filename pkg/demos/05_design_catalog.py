"""Query the bundled catalog of published ternary adder designs.

Each record is one reported design point: style, technology, whether the
cell is complete or partial, how its carry is encoded, and the reported
delay/power/PDP figures.  pdp_check recomputes delay x power for every
row that has both and flags rows whose recorded PDP disagrees with its
own factors -- a cheap arithmetic audit of the source data.
"""

from tritforge import aggregate, load_results, load_survey, pdp_check


def main() -> None:
    survey = load_survey()
    print(f"survey: {len(survey)} designs")
    for field in ("completeness", "carry_encoding", "technology"):
        parts = ", ".join(f"{label} {count} ({pct:.1f}%)"
                          for label, (count, pct)
                          in aggregate(survey, field).items())
        print(f"  by {field}: {parts}")

    print()
    results = load_results()
    print(f"results: {len(results)} measured design points")
    bad = [(key, recomputed) for key, recomputed, ok in pdp_check(results)
           if not ok]
    if bad:
        print("rows whose recorded PDP disagrees with delay x power:")
        for key, recomputed in bad:
            rec = next(r for r in results if r.key == key)
            print(f"  {key}: recorded {rec.pdp_fj} fJ, "
                  f"recomputed {recomputed:.4f} fJ "
                  f"({rec.delay_ps} ps x {rec.power_uw} uW)")
    else:
        print("all recorded PDP values consistent")


if __name__ == "__main__":
    main()
