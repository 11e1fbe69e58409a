import os
import random

import pytest

from tritforge.errors import (
    DomainError,
    NonInputAssumptionError,
    UnknownNetError,
)
from tritforge.generate import (
    Cascade,
    Completeness,
    Style,
    StyleSpec,
    gen_tfa,
)
from tritforge.netlist import (
    DOMAIN_BINARY,
    DOMAIN_HALFPAIR,
    DOMAIN_TERNARY,
    Device,
    Netlist,
    Polarity,
    ThresholdClass,
    parse,
)
from tritforge.passes import (
    AssumptionDomain,
    apply_assumption,
    factor_parallel,
    prune_dead,
    rebind_carry,
    simplify_pipeline,
)
from tritforge.solver import (
    division_counts,
    truth_table,
)
from tritforge.trits import Encoding, Level

HALFPAIR = frozenset({Level.GND, Level.HALF})
BINARY = frozenset({Level.GND, Level.VDD})

SEED = int(os.environ.get("TRITFORGE_SEED", "20230321"))


def test_assumption_domain_validation():
    with pytest.raises(DomainError):
        AssumptionDomain(net="c", levels=frozenset())
    with pytest.raises(DomainError):
        AssumptionDomain(net="c", levels=frozenset({Level.Z}))


def test_assumption_targets_inputs_only():
    n = parse(".input c halfpair\nm x p hvt g=c s=u d=w\n.end\n")
    with pytest.raises(UnknownNetError):
        apply_assumption(n, AssumptionDomain("nosuch", HALFPAIR))
    with pytest.raises(NonInputAssumptionError):
        apply_assumption(n, AssumptionDomain("u", HALFPAIR))


# -- single-device rule suite ---------------------------------------------
#
# Each case places one subject device "x" between probe-held nets u and w
# and asserts its fate under the assumption c in {0, 1} (or binary where
# noted).  Gate "ci" is produced by an inverter cell where named.

PROBES = (
    "m ka p mvt g=GND s=VDD d=u\n"
    "m kb n mvt g=VDD s=w d=GND\n"
)
NTI_CELL = (
    "m ip p hvt g=c s=VDD d=ci\n"
    "m in n mvt g=c s=ci d=GND\n"
)
PTI_CELL = (
    "m ip p mvt g=c s=VDD d=ci\n"
    "m in n hvt g=c s=ci d=GND\n"
)
STI_CELL = (
    "m i0 p hvt g=c s=VDD d=ci\n"
    "m i1 n hvt g=c s=ci d=GND\n"
    "m i2 p mvt g=c s=VDD d=im1\n"
    "m i3 n mvt g=VDD s=im1 d=ci\n"
    "m i4 p mvt g=GND s=ci d=im2\n"
    "m i5 n mvt g=c s=im2 d=GND\n"
)

RULE_CASES = [
    # (device line, inverter cell, domain token, expected fate)
    ("m x p lvt g=c s=u d=w",  "",       "halfpair", "wire"),
    ("m x p hvt g=c s=u d=w",  "",       "halfpair", "keep"),
    ("m x p hvt g=ci s=u d=w", STI_CELL, "halfpair", "open"),
    ("m x p mvt g=ci s=u d=w", PTI_CELL, "halfpair", "open"),
    ("m x p mvt g=c s=u d=w",  "",       "halfpair", "wire"),
    ("m x n hvt g=c s=u d=w",  "",       "halfpair", "open"),
    ("m x n hvt g=ci s=u d=w", NTI_CELL, "halfpair", "keep"),
    ("m x n mvt g=ci s=u d=w", PTI_CELL, "halfpair", "wire"),
    ("m x n lvt g=ci s=u d=w", PTI_CELL, "halfpair", "wire"),
    ("m x p hvt g=c s=u d=w",  "",       "binary",   "remap"),
]


@pytest.mark.parametrize("dev,cell,domain,fate", RULE_CASES)
def test_single_device_rules(dev, cell, domain, fate):
    text = f".input c {domain}\n{cell}{dev}\n{PROBES}.end\n"
    n = parse(text)
    levels = HALFPAIR if domain == "halfpair" else BINARY
    out, report = apply_assumption(n, AssumptionDomain("c", levels))
    devs = {d.id: d for d in out.devices}
    if fate == "keep":
        assert devs["x"].vt == dict((d.id, d) for d in n.devices)["x"].vt
    elif fate == "remap":
        assert devs["x"].vt is ThresholdClass.LVT
        assert report.remapped >= 1
    else:
        assert "x" not in devs
        ka, kb = devs["ka"], devs["kb"]
        probe_u = ka.source if ka.source != "VDD" else ka.drain
        probe_w = kb.source if kb.source != "GND" else kb.drain
        if fate == "wire":
            assert probe_u == probe_w
        else:  # open
            assert probe_u != probe_w


def test_apply_assumption_restricts_input_domain():
    n = parse(".input c ternary\nm x p hvt g=c s=u d=w\n" + PROBES + ".end\n")
    out, _ = apply_assumption(n, AssumptionDomain("c", HALFPAIR))
    assert out.input_domain("c") == HALFPAIR


def test_apply_assumption_keeps_devices_on_input_channels():
    # an always-on pass device whose channel touches an input must survive:
    # merging would erase the input's driver
    n = parse(
        ".input a ternary\n.input c halfpair\n.output y\n"
        "m x p lvt g=c s=a d=y\n.end\n"
    )
    out, report = apply_assumption(n, AssumptionDomain("c", HALFPAIR))
    assert "x" in {d.id for d in out.devices}
    assert report.wired == 0


def test_prune_dead_keeps_output_cone():
    n = parse(
        ".input a ternary\n.output y\n"
        "m p0 p hvt g=a s=VDD d=y\n"
        "m n0 n hvt g=a s=y d=GND\n"
        "m z0 p hvt g=a s=VDD d=orphan\n"
        "m z1 n hvt g=orphan s=other d=GND\n"
        ".end\n"
    )
    out, report = prune_dead(n)
    assert {d.id for d in out.devices} == {"p0", "n0"}
    assert report.pruned == 2


def test_prune_dead_follows_gate_fanin():
    # y <- inverter gated by t, t driven by a: both stages are live
    n = parse(
        ".input a binary\n.output y\n"
        "m s0 p lvt g=a s=VDD d=t\n"
        "m s1 n lvt g=a s=t d=GND\n"
        "m s2 p lvt g=t s=VDD d=y\n"
        "m s3 n lvt g=t s=y d=GND\n"
        ".end\n"
    )
    out, report = prune_dead(n)
    assert len(out.devices) == 4 and report.pruned == 0


def test_factor_parallel_merges_duplicates_and_mirrors():
    n = parse(
        ".input a ternary\n.output y\n"
        "m d0 p hvt g=a s=VDD d=y\n"
        "m d1 p hvt g=a s=VDD d=y\n"
        "m d2 p hvt g=a s=y d=VDD tag=divider\n"  # mirrored channel
        "m d3 n hvt g=a s=y d=GND\n"
        ".end\n"
    )
    out, report = factor_parallel(n)
    assert report.factored == 2
    ids = {d.id for d in out.devices}
    assert ids == {"d0", "d3"}
    # tags from the merged mirror are kept on the survivor
    assert "divider" in next(d for d in out.devices if d.id == "d0").tags


def test_rebind_carry_requires_known_net():
    n = gen_tfa(StyleSpec(Style.TERNARY_CMOS, Completeness.PARTIAL))
    with pytest.raises(UnknownNetError):
        rebind_carry(n, "bogus")


@pytest.mark.parametrize("style", list(Style))
def test_rebind_carry_eliminates_division(style):
    n = gen_tfa(StyleSpec(style, Completeness.PARTIAL,
                          carry_encoding=Encoding.HALF_VDD_HIGH))
    assert sum(division_counts(n, "carry")) > 0
    out, report = rebind_carry(n, "carry")
    assert sum(division_counts(out, "carry")) == 0
    assert report.wired > 0 and report.opened > 0
    assert out.output_encoding("carry") is Encoding.FULL_VDD_HIGH


@pytest.mark.parametrize("style", list(Style))
def test_pipeline_complete_to_partial(style):
    for cascade in Cascade:
        n = gen_tfa(StyleSpec(style, Completeness.COMPLETE, cascade=cascade))
        a = AssumptionDomain("cin", HALFPAIR)
        out, report = simplify_pipeline(n, a, rebind=True, carry_net="carry")
        ref = gen_tfa(StyleSpec(style, Completeness.PARTIAL,
                                carry_encoding=Encoding.FULL_VDD_HIGH,
                                cascade=cascade))
        # behaviourally identical to a natively generated partial cell
        from tritforge.solver import decoded_truth
        assert decoded_truth(out) == decoded_truth(ref)
        assert len(out.devices) < len(n.devices)
        assert sum(division_counts(out, "carry")) == 0


def test_pipeline_is_idempotent():
    for style in Style:
        n = gen_tfa(StyleSpec(style, Completeness.COMPLETE))
        a = AssumptionDomain("cin", HALFPAIR)
        once, _ = simplify_pipeline(n, a, rebind=True, carry_net="carry")
        twice, report = simplify_pipeline(once, a, rebind=True, carry_net="carry")
        assert twice == once
        assert report.wired == report.opened == report.pruned == 0


# -- randomized soundness -------------------------------------------------


def _random_netlist(rng):
    domains = [DOMAIN_TERNARY, DOMAIN_BINARY, DOMAIN_HALFPAIR]
    inputs = [(name, rng.choice(domains))
              for name in ["a", "b", "c"][: rng.randint(1, 3)]]
    input_names = [name for name, _ in inputs]
    internal = [f"n{i}" for i in range(rng.randint(2, 6))]
    out = rng.choice(internal)
    channel_nets = internal + ["VDD", "GND"]
    devices = []
    for i in range(rng.randint(1, 20)):
        s, d = rng.sample(channel_nets, 2)
        devices.append(Device(
            f"m{i}",
            rng.choice(list(Polarity)),
            rng.choice(list(ThresholdClass)),
            rng.choice(input_names + ["VDD", "GND"]),
            s, d,
        ))
    return Netlist(
        inputs=tuple(inputs),
        outputs=((out, Encoding.STANDARD),),
        devices=tuple(devices),
    )


def _tables_agree(n, out, overrides):
    try:
        ta = truth_table(n, overrides)
    except Exception as exc:  # noqa: BLE001 - sentinel comparison
        ta = type(exc).__name__
    try:
        tb = truth_table(out, overrides)
    except Exception as exc:  # noqa: BLE001
        tb = type(exc).__name__
    if isinstance(ta, str) or isinstance(tb, str):
        return ta == tb
    return list(ta.values()) == list(tb.values())


def test_simplification_soundness_randomized():
    rng = random.Random(SEED)
    checked = 0
    for _ in range(1000):
        n = _random_netlist(rng)
        target, domain = rng.choice(n.inputs)
        levels = frozenset(rng.sample(
            sorted(domain, key=lambda l: l.value),
            rng.randint(1, len(domain))))
        a = AssumptionDomain(target, levels)
        out, _ = simplify_pipeline(n, a)
        assert len(out.devices) <= len(n.devices)
        assert _tables_agree(n, out, {target: levels}), (n, a)
        checked += 1
    assert checked == 1000
