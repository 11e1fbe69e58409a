"""The three ternary inverters, simulated at the switch level.

A ternary net carries 0, 1, or 2 as 0V, half the supply, or the full
supply.  The negative and positive inverters (NTI, PTI) are ordinary
two-device stacks that differ only in threshold class; the standard
inverter (STI) adds a conditioned divider pair so its output can sit at
the half level.  Run this to see all three truth tables and where the
STI actually burns static power.
"""

from tritforge import GateKind, decoded_truth, division_counts, gen_gate
from tritforge.netlist import serialize


def show(kind: GateKind) -> None:
    cell = gen_gate(kind)
    truth = decoded_truth(cell)
    row = "  ".join(f"{a}->{y[0]}" for (a,), y in sorted(truth.items()))
    print(f"{kind.value:8s} {row}")


def main() -> None:
    for kind in (GateKind.NTI, GateKind.PTI, GateKind.STI):
        show(kind)

    sti = gen_gate(GateKind.STI)
    print()
    print("STI netlist:")
    print(serialize(sti))

    # the divider conducts to both rails only when the input is 1
    per_state = division_counts(sti, net="y")
    for trit, events in enumerate(per_state):
        note = "voltage division (static current!)" if events else "quiet"
        print(f"input={trit}: {events} division event(s) on y -- {note}")


if __name__ == "__main__":
    main()
