import math
from dataclasses import replace

import numpy as np
import pytest

from chiralsim.evolution import CollapseChannel
from chiralsim.hamiltonian import DetuningSet
from chiralsim.protocol import ProtocolSpec, run_both
from chiralsim.robustness import ErrorModel, apply_error, cartesian_grid, records_table, run_sweep
from oracles import IDEAL, protocol_contrast, scaled

SPEC = ProtocolSpec()


class TestApplyError:
    def test_zero_model_is_identity(self):
        assert apply_error(SPEC, ErrorModel()) == SPEC

    def test_uniform_scale(self):
        out = apply_error(SPEC, ErrorModel(epsilon=0.1))
        for name in ("area1", "area2_12", "area2_23", "area3"):
            assert getattr(out, name) == pytest.approx(1.1 * getattr(SPEC, name), rel=1e-15)

    def test_per_step_scale(self):
        out = apply_error(SPEC, ErrorModel(step_epsilon=(0.0, -0.1, 0.0)))
        assert out.area1 == SPEC.area1
        assert out.area2_12 == pytest.approx(0.9 * SPEC.area2_12)
        assert out.area3 == SPEC.area3

    def test_phase_offset_breaks_phase_condition(self):
        out = apply_error(SPEC, ErrorModel(phase_offset=math.pi / 2))
        assert out.phase12 == pytest.approx(math.pi)
        expected = protocol_contrast(*IDEAL, phase12=math.pi)
        assert run_both(out).contrast == pytest.approx(expected, abs=1e-12)

    def test_detuning_adds(self):
        base = replace(SPEC, detuning=DetuningSet(0.1, 0.0, 0.0))
        out = apply_error(base, ErrorModel(detuning=DetuningSet(0.0, 0.2, 0.3)))
        assert out.detuning == DetuningSet(0.1, 0.2, 0.3)

    def test_from_params(self):
        model = ErrorModel.from_params({"epsilon": 0.1, "gamma": 0.02, "delta13": 0.5}, decay_channels=("31",))
        assert model.epsilon == 0.1
        assert model.decay == (CollapseChannel(3, 1, 0.02),)
        assert model.detuning.delta13 == 0.5
        with pytest.raises(ValueError, match="unknown"):
            ErrorModel.from_params({"temperature": 1.0})


class TestGrid:
    def test_cartesian_order(self):
        grid = cartesian_grid({"a": [1, 2], "b": [10, 20, 30]})
        assert grid == [
            {"a": 1, "b": 10}, {"a": 1, "b": 20}, {"a": 1, "b": 30},
            {"a": 2, "b": 10}, {"a": 2, "b": 20}, {"a": 2, "b": 30},
        ]


class TestSweep:
    def test_zero_point(self):
        (rec,) = run_sweep(SPEC, [ErrorModel()])
        assert rec.contrast == pytest.approx(1, abs=1e-10)
        assert rec.engine == "piecewise"
        assert rec.error is None

    def test_epsilon_grid(self):
        recs = run_sweep(SPEC, cartesian_grid({"epsilon": [-0.1, 0.0, 0.1]}))
        assert [r.params["epsilon"] for r in recs] == [-0.1, 0.0, 0.1]
        assert recs[0].contrast == pytest.approx(recs[2].contrast, abs=1e-10)
        for r in recs:
            assert r.contrast == pytest.approx(protocol_contrast(*scaled(r.params["epsilon"])), abs=1e-12)

    def test_decay_lowers_contrast(self):
        recs = run_sweep(SPEC, cartesian_grid({"gamma": [0.0, 0.02]}))
        assert [r.engine for r in recs] == ["piecewise", "lindblad"]
        assert recs[1].contrast < recs[0].contrast
        assert recs[1].drift <= 1e-8
        # step-refinement oracle for the decay point
        fine = run_sweep(SPEC, [recs[1].params], step=SPEC.durations[0] / 4000)[0]
        assert recs[1].contrast == pytest.approx(fine.contrast, abs=1e-5)

    def test_detuning_uses_rk4(self):
        (rec,) = run_sweep(SPEC, [{"delta13": 0.2}])
        assert rec.engine == "rk4"
        assert 0 < rec.contrast < 1

    def test_populations_sum_to_one(self):
        recs = run_sweep(SPEC, cartesian_grid({"epsilon": [-0.2, 0.2], "phase_offset": [-0.5, 0.5], "delta12": [0.0, 0.3]}))
        table = records_table(recs)
        assert np.allclose(table[:, 0:3].sum(axis=1), 1, atol=1e-8)
        assert np.allclose(table[:, 3:6].sum(axis=1), 1, atol=1e-8)

    def test_concurrent_order_and_determinism(self):
        grid = cartesian_grid({"epsilon": [-0.1, 0.05, 0.1], "phase_offset": [0.0, 0.3], "delta23": [0.0, 0.1]})
        serial = run_sweep(SPEC, grid)
        parallel = run_sweep(SPEC, grid, workers=4)
        again = run_sweep(SPEC, grid)
        assert [r.params for r in parallel] == grid
        assert records_table(serial).tobytes() == records_table(parallel).tobytes()
        assert records_table(serial).tobytes() == records_table(again).tobytes()

    def test_errors_are_annotated(self):
        shaped = replace(SPEC, shape="gaussian")
        recs = run_sweep(shaped, [{"delta13": 0.1}, {"epsilon": 0.0}], engine="piecewise")
        assert recs[0].error is not None and "NonCommutingSegmentError" in recs[0].error
        assert math.isnan(recs[0].contrast)
        assert recs[1].error is None
        assert recs[1].contrast == pytest.approx(1, abs=1e-10)

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            run_sweep(SPEC, [])
