"""Stimulus generation and the dimensionless metrics report.

The simulator does not pretend to know picoseconds or microwatts; it
reports proxies instead: settling rounds for delay, mean division
events for static-power pressure, and toggle activity for dynamic
power.  The complete-transitions pattern exercises every ordered pair
of input states exactly once, which makes those proxies comparable
across designs.
"""

from tritforge import (
    Completeness,
    Encoding,
    PatternKind,
    Style,
    StyleSpec,
    gen_pattern,
    gen_testbench,
    gen_tfa,
    simulate_pattern,
)


def measure(spec: StyleSpec) -> None:
    bench = gen_testbench(gen_tfa(spec))
    pattern = gen_pattern(list(bench.inputs), PatternKind.COMPLETE_TRANSITIONS)
    _, report = simulate_pattern(bench, pattern.rows)
    label = f"{spec.completeness.value}/{spec.carry_encoding.value}"
    print(f"{spec.style.value:14s} {label:18s} "
          f"devices={report.device_total:3d} "
          f"delay={report.delay_rounds} rounds  "
          f"static={report.static_div_mean:.2f} div/state  "
          f"activity={report.activity:.2f}")


def main() -> None:
    print("full-adder cells under a buffered bench with fan-out-of-4 loads")
    print(f"(complete pattern: every ordered state pair once)\n")
    for style in Style:
        measure(StyleSpec(style, Completeness.COMPLETE))
        measure(StyleSpec(style, Completeness.PARTIAL,
                          carry_encoding=Encoding.HALF_VDD_HIGH))
        measure(StyleSpec(style, Completeness.PARTIAL,
                          carry_encoding=Encoding.FULL_VDD_HIGH))
        print()


if __name__ == "__main__":
    main()
