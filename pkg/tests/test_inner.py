import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksn.errors import DomainError
from ksn.inner import InnerFunction, eval_phi, splitmix64, verify_monotone_lipschitz

MASK = (1 << 64) - 1


def reference_splitmix_stream(seed, count):
    # straight transcription of the published generator (state += gamma; mix)
    state = seed
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def oracle_phi(seed, segments, upper, t):
    """Integrate the slope profile piece by piece, from scratch."""
    def unit(i):
        s0 = reference_splitmix_stream(seed, 1)[0]
        h = reference_splitmix_stream(s0 ^ i, 1)[0]
        return Fraction(h >> 11, 2 ** 53)

    raw = [1 + 3 * unit(i) for i in range(segments)]
    mean = sum(raw) / segments
    width = Fraction(upper) / segments
    total = Fraction(0)
    for i, s in enumerate(raw):
        lo, hi = i * width, (i + 1) * width
        overlap = max(Fraction(0), min(hi, t) - lo)
        total += s / mean * overlap
    return total


def test_splitmix_known_vector():
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert reference_splitmix_stream(0, 2)[1] == 0x6E789E6AA1B965F4


def test_power_at_zero():
    assert eval_phi(InnerFunction.power(2), 0.0) == 1.0


def test_single_segment_is_identity():
    phi = InnerFunction.hashed(123, 1)
    assert eval_phi(phi, 0.25) == 0.25
    assert eval_phi(phi, Fraction(1, 4)) == Fraction(1, 4)


@pytest.mark.parametrize("t", [Fraction(0), Fraction(1, 7), Fraction(3, 4), Fraction(1), Fraction(3, 2)])
def test_hashed_matches_integral_oracle(t):
    assert eval_phi(InnerFunction.hashed(42, 64), t) == oracle_phi(42, 64, Fraction(3, 2), t)


def test_hashed_strictly_increasing_on_dyadic_grid():
    phi = InnerFunction.hashed(42, 64)
    vals = [eval_phi(phi, Fraction(i, 128)) for i in range(129)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_hashed_float_agrees_with_exact():
    phi = InnerFunction.hashed(9, 17)
    for i in range(101):
        t = Fraction(3 * i, 200)
        assert eval_phi(phi, float(t)) == pytest.approx(float(eval_phi(phi, t)), abs=1e-15)


def test_slopes_in_range_and_mean_one():
    slopes = InnerFunction.hashed(7, 32).slopes()
    assert all(0 < s < 4 for s in slopes)
    assert sum(slopes) / len(slopes) == 1


def test_domain_error():
    phi = InnerFunction.hashed(1, 4)
    with pytest.raises(DomainError):
        eval_phi(phi, -0.001)
    with pytest.raises(DomainError):
        eval_phi(phi, Fraction(3, 2) + Fraction(1, 10 ** 9))
    with pytest.raises(DomainError):
        eval_phi(InnerFunction.power(), Fraction(1, 2))


def test_verify_power_on_0_2():
    rep = verify_monotone_lipschitz(InnerFunction.power(2), 1000)
    assert rep.monotone
    assert rep.lipschitz_estimate <= 2 ** 0.5 * 3 ** (2 ** 0.5 - 1) + 1e-9


@pytest.mark.parametrize("spec", [InnerFunction.power(2), InnerFunction.hashed(3, 9)])
def test_two_point_grid_is_secant(spec):
    a, b = 0.0, float(spec.upper)
    rep = verify_monotone_lipschitz(spec, 2)
    assert rep.lipschitz_estimate == pytest.approx((eval_phi(spec, b) - eval_phi(spec, a)) / (b - a))


def test_verify_hashed_lipschitz_bound():
    rep = verify_monotone_lipschitz(InnerFunction.hashed(7, 32), 10 ** 4)
    assert rep.monotone and rep.lipschitz_estimate <= 4


def test_grid_points_precondition():
    with pytest.raises(ValueError):
        verify_monotone_lipschitz(InnerFunction.power(), 1)


exact_t = st.fractions(min_value=0, max_value=Fraction(3, 2), max_denominator=10 ** 6)
specs = st.builds(InnerFunction.hashed, st.integers(0, 2 ** 64 - 1), st.integers(1, 80))


@settings(max_examples=200, deadline=None)
@given(specs, exact_t, exact_t)
def test_exact_monotone_and_lipschitz(spec, t1, t2):
    if t1 == t2:
        return
    lo, hi = sorted((t1, t2))
    v1, v2 = eval_phi(spec, lo), eval_phi(spec, hi)
    assert isinstance(v1, Fraction)
    assert v1 < v2
    assert v2 - v1 <= 4 * (hi - lo)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1.5), st.floats(1e-9, 1.5))
def test_float_monotone_and_lipschitz(t, gap):
    for spec in (InnerFunction.hashed(11, 64), InnerFunction.power()):
        u = min(t + gap, 1.5)
        if u - t < 1e-9:
            continue
        v1, v2 = eval_phi(spec, t), eval_phi(spec, u)
        assert v1 < v2
        assert v2 - v1 <= 4 * (u - t) + 1e-12


def test_reproducible_across_processes():
    code = (
        "from ksn.inner import InnerFunction, eval_phi\n"
        "p = InnerFunction.hashed(2024, 50)\n"
        "print([repr(eval_phi(p, i / 97)) for i in range(98)])\n"
    )
    runs = {subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                           check=True).stdout for _ in range(2)}
    assert len(runs) == 1
