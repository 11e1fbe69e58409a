import pytest
from hypothesis import given, strategies as st

from tritforge.errors import DomainError
from tritforge.trits import (
    Encoding,
    InverterKind,
    Level,
    PowerBreakdown,
    TRITS,
    check_trit,
    decode,
    encode,
    full_add_complete,
    full_add_partial,
    level_volts,
    pdp,
    power_total,
    ternary_inverter,
)

trits = st.sampled_from(TRITS)


def test_check_trit_accepts_only_unsigned_digits():
    for t in TRITS:
        assert check_trit(t) == t
    for bad in (-1, 3, 0.5, "1", True, None):
        with pytest.raises(DomainError):
            check_trit(bad)


def test_level_volts():
    assert level_volts(Level.GND) == 0.0
    assert level_volts(Level.HALF) == pytest.approx(0.45)
    assert level_volts(Level.VDD) == pytest.approx(0.9)
    assert level_volts(Level.HALF, vdd=1.2) == pytest.approx(0.6)
    with pytest.raises(DomainError):
        level_volts(Level.Z)


@given(trits)
def test_encode_decode_roundtrip_standard(t):
    assert decode(encode(t)) == t


def test_carry_encodings():
    assert encode(1, Encoding.HALF_VDD_HIGH) is Level.HALF
    assert encode(1, Encoding.FULL_VDD_HIGH) is Level.VDD
    assert decode(Level.VDD, Encoding.FULL_VDD_HIGH) == 1
    # logic 2 has no representation on a binary-valued carry
    with pytest.raises(DomainError):
        encode(2, Encoding.HALF_VDD_HIGH)
    with pytest.raises(DomainError):
        decode(Level.HALF, Encoding.FULL_VDD_HIGH)


def test_inverter_truth_tables():
    assert [ternary_inverter(InverterKind.NTI, t) for t in TRITS] == [2, 0, 0]
    assert [ternary_inverter(InverterKind.PTI, t) for t in TRITS] == [2, 2, 0]
    assert [ternary_inverter(InverterKind.STI, t) for t in TRITS] == [2, 1, 0]


@given(trits)
def test_sti_is_mean_of_nti_and_pti(t):
    nti = ternary_inverter(InverterKind.NTI, t)
    pti = ternary_inverter(InverterKind.PTI, t)
    assert ternary_inverter(InverterKind.STI, t) == (nti + pti) // 2


@given(trits, trits, trits)
def test_full_add_complete_identity(a, b, c):
    carry, total = full_add_complete(a, b, c)
    assert 3 * carry + total == a + b + c
    assert total in TRITS and carry in TRITS


def test_complete_carry_reaches_two_only_at_all_twos():
    twos = [(a, b, c) for a in TRITS for b in TRITS for c in TRITS
            if full_add_complete(a, b, c)[0] == 2]
    assert twos == [(2, 2, 2)]


@given(trits, trits, st.sampled_from([0, 1]))
def test_partial_agrees_with_complete_on_restriction(a, b, cin):
    assert full_add_partial(a, b, cin) == full_add_complete(a, b, cin)
    assert full_add_partial(a, b, cin)[0] in (0, 1)


def test_partial_rejects_carry_in_two():
    with pytest.raises(DomainError):
        full_add_partial(1, 1, 2)


def test_pdp_values():
    assert pdp(67.210e-12, 6.2825e-6) == pytest.approx(0.4223e-15, rel=5e-4)
    with pytest.raises(DomainError):
        pdp(-1e-12, 1e-6)


@given(st.floats(0, 1), st.floats(0, 1e-12), st.floats(0, 1e10),
       st.floats(0.1, 2.0), st.floats(0, 1e-3))
def test_power_total_decomposition(a, c, f, v, i):
    p = PowerBreakdown(activity=a, load_f=c, frequency=f, supply_v=v, i_static=i)
    static_only = PowerBreakdown(activity=0, load_f=c, frequency=f,
                                 supply_v=v, i_static=i)
    assert power_total(p) == pytest.approx(a * c * f * v**2 + i * v)
    # the static part does not move with load or frequency
    assert power_total(static_only) == pytest.approx(
        power_total(PowerBreakdown(0, 2 * c, 3 * f + 1, v, i)))


def test_power_total_linear_in_load():
    base = dict(activity=0.4, frequency=1e9, supply_v=0.9, i_static=1e-6)
    p1 = power_total(PowerBreakdown(load_f=1e-15, **base))
    p2 = power_total(PowerBreakdown(load_f=2e-15, **base))
    p0 = power_total(PowerBreakdown(load_f=0.0, **base))
    assert p2 - p0 == pytest.approx(2 * (p1 - p0))


def test_power_breakdown_rejects_negative_fields():
    with pytest.raises(DomainError):
        PowerBreakdown(activity=-0.1, load_f=0, frequency=0, supply_v=0.9)
