"""A four-digit ternary ripple-carry adder, verified exhaustively.

The chain is built from partial full-adder cells whose carries ride at
the full supply, so each carry hop is an ordinary binary signal and the
ripple path never relies on voltage division.  Every one of the
3^4 * 3^4 * 2 = 13122 input combinations is solved and compared against
plain base-3 integer addition.
"""

import itertools
import time

from tritforge import (
    Completeness,
    Encoding,
    Style,
    StyleSpec,
    decoded_truth,
    gen_rca,
)


def main() -> None:
    spec = StyleSpec(
        Style.TERNARY_CMOS,
        Completeness.PARTIAL,
        carry_encoding=Encoding.FULL_VDD_HIGH,
    )
    rca = gen_rca(4, spec)
    print(f"{rca.title}: {len(rca.devices)} devices, "
          f"{len(rca.input_names)} inputs, {len(rca.output_names)} outputs")

    t0 = time.monotonic()
    truth = decoded_truth(rca)
    elapsed = time.monotonic() - t0
    print(f"solved {len(truth)} input combinations in {elapsed:.2f}s")

    mismatches = 0
    for pt, val in truth.items():
        a = sum(d * 3**i for i, d in enumerate(pt[0:4]))
        b = sum(d * 3**i for i, d in enumerate(pt[4:8]))
        total = a + b + pt[8]
        digits = tuple(total // 3**i % 3 for i in range(4)) + (total // 81,)
        if val != digits:
            mismatches += 1
    print(f"mismatches against base-3 addition: {mismatches}")

    # spot-check one addition the long way: 80 + 80 + 1 = 161
    pt = (2, 2, 2, 2, 2, 2, 2, 2, 1)
    s0, s1, s2, s3, cout = truth[pt]
    print(f"2222_3 + 2222_3 + 1 = {cout}{s3}{s2}{s1}{s0}_3 "
          f"(= {s0 + 3*s1 + 9*s2 + 27*s3 + 81*cout} decimal)")


if __name__ == "__main__":
    main()
