import itertools

import pytest

from tritforge.errors import DomainError, UnsupportedCombinationError
from tritforge.generate import (
    Cascade,
    Completeness,
    GateKind,
    Pattern,
    PatternKind,
    Style,
    StyleSpec,
    gen_gate,
    gen_pattern,
    gen_rca,
    gen_testbench,
    gen_tfa,
    gen_tha,
    pattern_from_text,
    pattern_to_text,
)
from tritforge.netlist import (
    DOMAIN_BINARY,
    DOMAIN_HALFPAIR,
    DOMAIN_TERNARY,
    validate,
)
from tritforge.solver import decoded_truth, division_counts
from tritforge.trits import (
    Encoding,
    Level,
    full_add_complete,
    full_add_partial,
)


def all_specs():
    for style in Style:
        for cascade in Cascade:
            yield StyleSpec(style, Completeness.COMPLETE, cascade=cascade)
            for enc in (Encoding.HALF_VDD_HIGH, Encoding.FULL_VDD_HIGH):
                yield StyleSpec(style, Completeness.PARTIAL,
                                carry_encoding=enc, cascade=cascade)


def test_spec_space_has_24_variants():
    assert len(list(all_specs())) == 24


@pytest.mark.parametrize("spec", list(all_specs()),
                         ids=lambda s: s.style.value + "-" +
                         s.completeness.value + "-" + s.carry_encoding.value +
                         "-" + s.cascade.value)
def test_full_adder_truth(spec):
    n = gen_tfa(spec)
    assert n.output_names == ("sum", "carry")
    oracle = (full_add_complete if spec.completeness is Completeness.COMPLETE
              else full_add_partial)
    truth = decoded_truth(n)
    cins = range(3) if spec.completeness is Completeness.COMPLETE else range(2)
    for a, b, c in itertools.product(range(3), range(3), cins):
        carry, total = oracle(a, b, c)
        assert truth[(a, b, c)] == (total, carry), (spec, a, b, c)
    assert validate(n) == []


def test_style_spec_rejects_bad_combinations():
    with pytest.raises(UnsupportedCombinationError):
        StyleSpec(Style.NTPT, Completeness.PARTIAL,
                  carry_encoding=Encoding.STANDARD)
    with pytest.raises(UnsupportedCombinationError):
        StyleSpec(Style.NTPT, Completeness.COMPLETE,
                  carry_encoding=Encoding.FULL_VDD_HIGH)


@pytest.mark.parametrize("style", list(Style))
def test_half_adder_truth(style):
    truth = decoded_truth(gen_tha(style))
    for a in range(3):
        for b in range(3):
            assert truth[(a, b)] == ((a + b) % 3, (a + b) // 3)


def test_half_adder_rejects_standard_carry():
    with pytest.raises(UnsupportedCombinationError):
        gen_tha(Style.MUX_PTTG, carry_encoding=Encoding.STANDARD)


GATE_TRUTHS = {
    GateKind.NTI: {(0,): (2,), (1,): (0,), (2,): (0,)},
    GateKind.PTI: {(0,): (2,), (1,): (2,), (2,): (0,)},
    GateKind.STI: {(0,): (2,), (1,): (1,), (2,): (0,)},
    GateKind.BINARY_INVERTER: {(0,): (1,), (1,): (0,)},
    GateKind.TERNARY_DECODER: {
        (0,): (1, 0, 0), (1,): (0, 1, 0), (2,): (0, 0, 1)},
    GateKind.TERNARY_BUFFER: {(0,): (0,), (1,): (1,), (2,): (2,)},
}


@pytest.mark.parametrize("kind", list(GateKind))
def test_gate_truths(kind):
    n = gen_gate(kind)
    assert decoded_truth(n) == GATE_TRUTHS[kind]
    assert validate(n) == []


def test_testbench_preserves_behaviour():
    dut = gen_tfa(StyleSpec(Style.TERNARY_CMOS, Completeness.PARTIAL))
    tb = gen_testbench(dut)
    assert tb.inputs == dut.inputs
    assert tb.outputs == dut.outputs
    assert decoded_truth(tb) == decoded_truth(dut)
    assert validate(tb) == []
    # the wrapper adds two input buffers per input and four loads per output
    assert len(tb.devices) > len(dut.devices)


def test_rca_requires_partial_vdd_carries():
    with pytest.raises(UnsupportedCombinationError):
        gen_rca(4, StyleSpec(Style.NTPT, Completeness.COMPLETE))
    with pytest.raises(UnsupportedCombinationError):
        gen_rca(4, StyleSpec(Style.NTPT, Completeness.PARTIAL,
                             carry_encoding=Encoding.HALF_VDD_HIGH))
    with pytest.raises(DomainError):
        gen_rca(0, StyleSpec(Style.NTPT, Completeness.PARTIAL,
                             carry_encoding=Encoding.FULL_VDD_HIGH))


def test_rca_two_digit_truth():
    spec = StyleSpec(Style.TERNARY_CMOS, Completeness.PARTIAL,
                     carry_encoding=Encoding.FULL_VDD_HIGH)
    n = gen_rca(2, spec)
    assert n.input_names == ("a0", "a1", "b0", "b1", "cin")
    assert n.output_names == ("s0", "s1", "cout")
    truth = decoded_truth(n)
    for a0, a1, b0, b1, cin in itertools.product(
            range(3), range(3), range(3), range(3), range(2)):
        a = a0 + 3 * a1
        b = b0 + 3 * b1
        total = a + b + cin
        want = (total % 3, total // 3 % 3, total // 9)
        assert truth[(a0, a1, b0, b1, cin)] == want
    # ripple carries run rail-to-rail: no division events on any carry net
    assert sum(division_counts(n, "cout")) == 0


def test_pattern_static_enumerates_product():
    domains = [("a", DOMAIN_TERNARY), ("c", DOMAIN_HALFPAIR)]
    p = gen_pattern(domains, PatternKind.STATIC_STATES)
    assert p.signals == ("a", "c")
    assert len(p.rows) == 6
    assert len(set(p.rows)) == 6


@pytest.mark.parametrize("domains,states", [
    ([("a", DOMAIN_TERNARY), ("b", DOMAIN_TERNARY),
      ("cin", DOMAIN_HALFPAIR)], 18),
    ([("a", DOMAIN_TERNARY), ("b", DOMAIN_TERNARY),
      ("cin", DOMAIN_TERNARY)], 27),
])
def test_pattern_complete_covers_every_ordered_pair(domains, states):
    p = gen_pattern(domains, PatternKind.COMPLETE_TRANSITIONS)
    assert p.transitions == states * (states - 1)
    pairs = set(zip(p.rows, p.rows[1:]))
    assert len(pairs) == p.transitions  # each ordered pair exactly once
    assert p.rows[0] == p.rows[-1]  # closed circuit


def test_pattern_complete_is_deterministic():
    domains = [("a", DOMAIN_TERNARY)]
    assert gen_pattern(domains, PatternKind.COMPLETE_TRANSITIONS) == \
        gen_pattern(domains, PatternKind.COMPLETE_TRANSITIONS)


def test_pattern_text_roundtrip():
    domains = [("a", DOMAIN_TERNARY), ("cin", DOMAIN_BINARY)]
    p = gen_pattern(domains, PatternKind.COMPLETE_TRANSITIONS)
    text = pattern_to_text(p, domains)
    back = pattern_from_text(text, domains)
    assert back.signals == p.signals
    assert back.rows == p.rows


def test_pattern_text_errors():
    domains = [("a", DOMAIN_TERNARY)]
    with pytest.raises(DomainError):
        pattern_from_text("0\n1\n", domains)  # rows before header
    with pytest.raises(DomainError):
        pattern_from_text(".signals a\n0 1\n", domains)
    with pytest.raises(DomainError):
        pattern_from_text(".signals bogus\n", domains)
    with pytest.raises(DomainError):
        pattern_from_text("# only a comment\n", domains)


def test_pattern_binary_encoding_in_text():
    # a binary-domain '1' sits at the full supply, not the half level
    domains = [("cin", DOMAIN_BINARY)]
    p = Pattern(("cin",), ((Level.VDD,),), PatternKind.CUSTOM)
    assert pattern_to_text(p, domains).splitlines()[1] == "1"
    assert pattern_from_text(".signals cin\n1\n", domains).rows == \
        ((Level.VDD,),)
