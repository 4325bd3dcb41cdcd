import math

import numpy as np
import pytest

from kleinb import (
    Branch,
    ClosedChannel,
    EvanescentBranch,
    FilterSetup,
    G_ELECTRON,
    InvalidSpinIndex,
    NegativeField,
    arrival_delay,
    arrival_delay_first_order,
    split_momenta,
)


def setup(**kwargs):
    base = dict(E=2.0, n=1, b=0.1, distance=1e6)
    base.update(kwargs)
    return FilterSetup(**base)


class TestSplitMomenta:
    def test_degenerate_at_g2(self):
        cp_up, cp_down = split_momenta(setup(g=2.0))
        assert cp_up == cp_down == math.sqrt(2.0 ** 2 - 1.0 - 2 * 0.1 * 1)

    def test_anomalous_g_splits_the_pair(self):
        cp_up, cp_down = split_momenta(setup(g=G_ELECTRON))
        assert cp_up < cp_down
        # split size is set by (g - 2) b
        assert cp_down ** 2 - cp_up ** 2 == pytest.approx(0.1 * (G_ELECTRON - 2.0), rel=1e-12)

    def test_closed_pair(self):
        with pytest.raises(ClosedChannel):
            split_momenta(setup(E=1.05, b=0.5, n=4))

    def test_validation(self):
        with pytest.raises(InvalidSpinIndex):
            setup(n=0)
        with pytest.raises(NegativeField):
            setup(b=-0.1)
        with pytest.raises(ValueError):
            setup(E=-1.0)
        with pytest.raises(ValueError):
            FilterSetup(E=2.0, n=1, b=0.1, branch=Branch.TRANSMITTED)  # V0 missing


class TestArrivalDelay:
    def test_zero_at_g2(self):
        assert arrival_delay(setup(g=2.0)) == 0.0

    def test_positive_for_anomalous_g(self):
        # the spin-up member is slower: flipped beam of a spin-down
        # incident electron arrives later
        assert arrival_delay(setup(g=G_ELECTRON)) > 0.0

    def test_linear_in_distance(self):
        one = arrival_delay(setup(distance=1.0))
        assert arrival_delay(setup(distance=2.0)) == 2.0 * one
        assert arrival_delay(setup(distance=1e6)) == pytest.approx(1e6 * one, rel=1e-15)

    def test_monotone_and_odd_in_g_minus_2(self):
        gs = np.linspace(1.99, 2.01, 21)
        delays = [arrival_delay(setup(g=float(g), distance=1.0)) for g in gs]
        assert all(b > a for a, b in zip(delays, delays[1:]))
        assert delays[0] < 0.0 < delays[-1]

    def test_first_order_expansion_agrees(self):
        for g in np.linspace(1.99, 2.01, 11):
            if g == 2.0:
                continue
            s = setup(g=float(g), distance=1e3)
            exact = arrival_delay(s)
            approx = arrival_delay_first_order(s)
            assert approx == pytest.approx(exact, rel=1e-6)

    def test_first_order_zero_at_g2(self):
        assert arrival_delay_first_order(setup(g=2.0)) == 0.0


class TestTransmittedBranch:
    def test_above_step_delay(self):
        s = setup(E=5.0, V0=2.0, branch=Branch.TRANSMITTED, g=G_ELECTRON)
        assert arrival_delay(s) > 0.0

    def test_klein_regime_delay(self):
        s = setup(E=2.0, V0=8.0, branch=Branch.TRANSMITTED, g=G_ELECTRON)
        assert arrival_delay(s) > 0.0

    def test_first_order_agrees(self):
        s = setup(E=5.0, V0=2.0, branch=Branch.TRANSMITTED, g=G_ELECTRON, distance=1e4)
        assert arrival_delay_first_order(s) == pytest.approx(arrival_delay(s), rel=1e-6)

    def test_evanescent_rejected(self):
        s = setup(E=2.0, V0=2.0, branch=Branch.TRANSMITTED, g=G_ELECTRON)
        with pytest.raises(EvanescentBranch):
            arrival_delay(s)

    def test_zero_at_g2(self):
        assert arrival_delay(setup(E=5.0, V0=2.0, branch=Branch.TRANSMITTED, g=2.0)) == 0.0
