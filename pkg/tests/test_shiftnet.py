import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nrldpc.shiftnet import (
    DONT_CARE,
    Mode,
    ShiftConfig,
    ShiftConfigError,
    ShiftTrace,
    banyan_variant_cost,
    banyan_variant_shift,
    cyclic_shift_oracle,
    mode_for,
    network_costs,
    partitioned_shift,
    rotate,
)


def test_oracle_examples():
    assert cyclic_shift_oracle(list("abcde"), 0) == list("abcde")
    assert cyclic_shift_oracle(list("abcde"), 2) == list("cdeab")


@given(st.integers(1, 40).flatmap(lambda z: st.tuples(st.just(z), st.integers(0, z - 1))))
def test_oracle_inverse(zs):
    Z, sv = zs
    data = list(range(Z))
    assert cyclic_shift_oracle(cyclic_shift_oracle(data, sv), (Z - sv) % Z) == data


def test_hand_evaluated_rotators():
    data = list("abcde")
    lanes = data + [DONT_CARE] * 3
    assert rotate(lanes, 2)[:3] == list("cde")
    assert rotate(lanes, 5)[3:5] == list("ab")
    trace = ShiftTrace(0, 0)
    assert banyan_variant_shift(data, ShiftConfig(8, 5, 2), trace) == list("cdeab")
    assert (trace.rotation_a, trace.rotation_b) == (2, 5)
    assert trace.select_b == [False, False, False, True, True]


def test_full_width_uses_rotator_a_only():
    for sv in range(12):
        trace = ShiftTrace(0, 0)
        data = list(range(12))
        assert banyan_variant_shift(data, ShiftConfig(12, 12, sv), trace) == cyclic_shift_oracle(data, sv)
        assert rotate(data, sv) == cyclic_shift_oracle(data, sv)


@pytest.mark.parametrize("N", [8, 24, 48, 96])
def test_structural_equals_oracle_exhaustive(N):
    rng = random.Random(N)
    for Z in range(1, N + 1):
        for sv in range(Z):
            data = [rng.random() for _ in range(Z)]
            trace = ShiftTrace(0, 0)
            assert banyan_variant_shift(data, ShiftConfig(N, Z, sv), trace) == cyclic_shift_oracle(data, sv)
            assert trace.select_b == [i >= Z - sv for i in range(Z)]


@given(st.integers(1, 96).flatmap(
    lambda z: st.tuples(st.just(z), st.integers(0, z - 1), st.integers(0, z - 1))))
def test_composition(args):
    Z, a, b = args
    data = list(range(Z))
    twice = banyan_variant_shift(banyan_variant_shift(data, ShiftConfig(96, Z, a)), ShiftConfig(96, Z, b))
    assert twice == banyan_variant_shift(data, ShiftConfig(96, Z, (a + b) % Z))


def test_dont_care_poisons_comparisons():
    with pytest.raises(RuntimeError):
        DONT_CARE == 1
    with pytest.raises(RuntimeError):
        DONT_CARE + 1


@pytest.mark.parametrize("kw", [dict(N=8, Z=5, SV=5), dict(N=8, Z=9, SV=0), dict(N=48, Z=30, SV=0, mode=Mode.QUAD_24)])
def test_config_errors(kw):
    with pytest.raises(ShiftConfigError):
        ShiftConfig(**kw)


def test_partition_identical_frames():
    frame = (list(range(40)), 7)
    a, b = partitioned_shift([frame, frame], "dual-48")
    assert a == b == cyclic_shift_oracle(frame[0], 7)


def test_partition_quad_distinct_shifts():
    frames = [(list(range(100 * k, 100 * k + 20)), sv) for k, sv in enumerate([0, 3, 11, 19])]
    out = partitioned_shift(frames, Mode.QUAD_24)
    assert out == [cyclic_shift_oracle(d, sv) for d, sv in frames]


def test_partition_dual_equals_independent_runs():
    rng = random.Random(3)
    frames = [([rng.random() for _ in range(33)], rng.randrange(33)) for _ in range(2)]
    single = [banyan_variant_shift(d, ShiftConfig(48, 33, sv)) for d, sv in frames]
    assert partitioned_shift(frames, Mode.DUAL_48) == single


@pytest.mark.parametrize("mode", [Mode.DUAL_48, Mode.QUAD_24])
def test_partition_isolation(mode):
    rng = random.Random(5)
    Z = mode.width
    frames = [([rng.random() for _ in range(Z)], rng.randrange(Z)) for _ in range(mode.n_subnets)]
    before = partitioned_shift(frames, mode)
    corrupted = [([-1.0] * Z, frames[0][1])] + frames[1:]
    after = partitioned_shift(corrupted, mode)
    assert after[1:] == before[1:]


def test_partition_errors():
    with pytest.raises(ShiftConfigError):
        partitioned_shift([(list(range(10)), 0)], Mode.DUAL_48)
    with pytest.raises(ShiftConfigError):
        partitioned_shift([(list(range(30)), 0)] * 4, Mode.QUAD_24)
    with pytest.raises(ShiftConfigError):
        partitioned_shift([(list(range(10)), 0), (list(range(12)), 0)], Mode.DUAL_48)


def test_mode_rule():
    assert mode_for(24) is Mode.QUAD_24
    assert mode_for(25) is Mode.DUAL_48
    assert mode_for(48) is Mode.DUAL_48
    assert mode_for(49) is Mode.SINGLE_96


def test_network_costs():
    c = network_costs(64)
    assert c["benes"].multiplexer_count == 704
    assert c["benes"].stage_count == 11
    assert (c["banyan"].multiplexer_count, c["banyan"].stage_count) == (384, 6)
    assert c["qsn"].stage_count == 7
    c2 = network_costs(2)
    assert c2["benes"].multiplexer_count == 2 and c2["banyan"].multiplexer_count == 2
    with pytest.raises(ValueError):
        network_costs(96)


def test_structural_stage_count_96():
    cost = banyan_variant_cost(96)
    # seven rotator stages; the select row makes eight if counted
    assert cost.rotator_stages == 7
    assert cost.total_stages == 8
