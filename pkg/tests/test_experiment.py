"""Run loop, error metric, trace CSV round trips, rate fitting, comparisons."""

import numpy as np
import pytest

from musicopt.dataio import synth_uniform
from musicopt.experiment import (
    Trace,
    TraceRecord,
    compare,
    export_csv,
    fit_linear_rate,
    plateau_error,
    reached_plateau,
    read_trace_csv,
    relative_error,
    rounds_to_threshold,
    run,
)
from musicopt.optimizers import AlgorithmConfig, StepSchedule
from musicopt.topology import erdos_renyi, half_identity, metropolis_weights


def desk_setup(seed=0, n=10, p=4, m=3, mu=1e-3):
    prob = synth_uniform(p, m, n, seed=seed, mu=mu)
    graph = erdos_renyi(n, 3.0, seed=seed)
    w = metropolis_weights(graph)
    return prob, graph, w, half_identity(w), prob.optimum()


class TestRelativeError:
    def test_zero_at_optimum(self):
        x_star = np.array([1.0, 2.0])
        x0 = np.zeros((3, 2))
        x = np.tile(x_star, (3, 1))
        assert relative_error(x, x_star, x0) == 0.0

    def test_one_at_start(self):
        x_star = np.array([1.0, 2.0])
        x0 = np.array([[0.0, 0.0], [4.0, 4.0], [1.0, 0.0]])
        assert relative_error(x0, x_star, x0) == pytest.approx(1.0, rel=1e-15)

    def test_half_distance_gives_quarter(self):
        x_star = np.array([2.0])
        x0 = np.array([[0.0]])
        x = np.array([[1.0]])
        assert relative_error(x, x_star, x0) == pytest.approx(0.25, rel=1e-15)

    def test_agent_starting_at_optimum_rejected(self):
        x_star = np.array([1.0])
        x0 = np.array([[1.0], [0.0]])
        with pytest.raises(ValueError, match="coincides"):
            relative_error(x0, x_star, x0)


class TestRun:
    def test_counters_follow_period(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("inexact_music", StepSchedule.constant(0.01), E=3)
        trace = run(prob, graph, w, cfg, T=10, x_star=x_star)
        assert len(trace.records) == 10
        last = trace.records[-1]
        assert (last.t, last.comm_rounds, last.grad_evals) == (10, 3, 10)
        for rec in trace.records:
            assert rec.comm_rounds == rec.t // 3
            assert rec.grad_evals == rec.t

    def test_alpha_column_tracks_schedule(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig(
            "inexact_music", StepSchedule.diminishing(0.001, 0.5), E=1
        )
        trace = run(prob, graph, w, cfg, T=4, x_star=x_star)
        # iteration t's row carries the step size used to reach it
        assert trace.records[0].alpha == 0.001
        assert trace.records[3].alpha == pytest.approx(0.0005, rel=1e-15)

    def test_status_max_iters_without_target(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("atc", StepSchedule.constant(0.01))
        trace = run(prob, graph, w, cfg, T=5, x_star=x_star)
        assert trace.terminal_status == "max_iters"
        assert trace.diverged_at is None

    def test_status_converged_with_target(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("exact_diffusion", StepSchedule.constant(0.02))
        trace = run(prob, graph, wb, cfg, T=4000, x_star=x_star, target_error=1e-6)
        assert trace.terminal_status == "converged"
        assert len(trace.records) == 4000  # runs to completion regardless

    def test_divergence_captured_not_raised(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("atc", StepSchedule.constant(1e6))
        trace = run(prob, graph, w, cfg, T=500, x_star=x_star)
        assert trace.terminal_status == "diverged"
        assert trace.diverged_at is not None
        assert len(trace.records) < 500
        assert all(np.isfinite(r.rel_error) for r in trace.records)

    def test_error_decreases_on_sane_run(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("atc", StepSchedule.constant(0.02))
        trace = run(prob, graph, w, cfg, T=600, x_star=x_star)
        assert trace.records[-1].rel_error < 0.01 * trace.records[0].rel_error

    def test_bit_identical_reruns(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("exact_music", StepSchedule.constant(0.02), E=3, beta=1.0)
        a = run(prob, graph, wb, cfg, T=100, x_star=x_star)
        b = run(prob, graph, wb, cfg, T=100, x_star=x_star)
        assert a.records == b.records

    def test_shape_validation(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("atc", StepSchedule.constant(0.01))
        with pytest.raises(ValueError, match="x_star"):
            run(prob, graph, w, cfg, T=3, x_star=np.zeros(7))
        with pytest.raises(ValueError, match="T"):
            run(prob, graph, w, cfg, T=0, x_star=x_star)


class TestTraceCsv:
    def make_trace(self):
        prob, graph, w, wb, x_star = desk_setup()
        cfg = AlgorithmConfig("inexact_music", StepSchedule.constant(0.01), E=2)
        return run(prob, graph, w, cfg, T=7, x_star=x_star)

    def test_header_and_status_line(self):
        text = export_csv(self.make_trace())
        lines = text.splitlines()
        assert lines[0] == "t,comm_rounds,grad_evals,rel_error,alpha"
        assert lines[-1] == "# status=max_iters"
        assert len(lines) == 9

    def test_round_trip_identity(self):
        trace = self.make_trace()
        back = read_trace_csv(export_csv(trace))
        assert back.records == trace.records
        assert back.terminal_status == trace.terminal_status

    def test_round_trip_diverged_status(self):
        trace = Trace(
            records=[TraceRecord(1, 1, 1, 0.5, 0.1)],
            terminal_status="diverged",
            diverged_at=2,
        )
        text = export_csv(trace)
        assert text.splitlines()[-1] == "# status=diverged(at 2)"
        back = read_trace_csv(text)
        assert back.terminal_status == "diverged" and back.diverged_at == 2

    def test_empty_trace(self):
        text = export_csv(Trace())
        assert text == "t,comm_rounds,grad_evals,rel_error,alpha\n# status=max_iters\n"
        assert read_trace_csv(text).records == []

    def test_rejects_bad_header(self):
        with pytest.raises(ValueError, match="header"):
            read_trace_csv("a,b\n# status=max_iters\n")

    def test_rejects_missing_status(self):
        with pytest.raises(ValueError, match="status"):
            read_trace_csv("t,comm_rounds,grad_evals,rel_error,alpha\n1,1,1,0.5,0.1\n")


def geometric_trace(rho=0.5, rounds=40):
    recs = [
        TraceRecord(k, k, k, rho**k, 0.01) for k in range(1, rounds + 1)
    ]
    return Trace(records=recs)


class TestFitLinearRate:
    def test_recovers_exact_geometric_rate(self):
        est = fit_linear_rate(geometric_trace(0.5), window=30)
        assert est.rho == pytest.approx(0.5, abs=1e-12)
        assert est.contracting

    def test_flat_trace_gives_one(self):
        recs = [TraceRecord(k, k, k, 0.7, 0.01) for k in range(1, 31)]
        est = fit_linear_rate(Trace(records=recs))
        assert est.rho == pytest.approx(1.0, abs=1e-9)
        assert est.contracting

    def test_growing_trace_reports_non_contraction(self):
        recs = [TraceRecord(k, k, k, 1.5**k, 0.01) for k in range(1, 20)]
        est = fit_linear_rate(Trace(records=recs))
        assert est.rho > 1.0
        assert not est.contracting

    def test_uses_combination_rows_only(self):
        # period 2: inner rows share the round index and must not distort the fit
        recs = []
        for t in range(1, 41):
            c = t // 2
            rel = 0.25**c if t % 2 == 0 else 0.9 * 0.25 ** (c + 1)
            recs.append(TraceRecord(t, c, t, rel, 0.01))
        est = fit_linear_rate(Trace(records=recs), window=15)
        assert est.rho == pytest.approx(0.25, rel=1e-6)

    def test_window_too_short(self):
        with pytest.raises(ValueError, match="window too short"):
            fit_linear_rate(geometric_trace(rounds=2))

    def test_non_positive_errors_rejected(self):
        recs = [TraceRecord(k, k, k, 0.0, 0.01) for k in range(1, 10)]
        with pytest.raises(ValueError, match="non-positive"):
            fit_linear_rate(Trace(records=recs))

    def test_desk_scale_rate_beats_theory_bound(self):
        # fitted per-round factor must not be slower than (1 - mu_est*alpha)^E
        from musicopt.objectives import estimate_bounds

        prob, graph, w, wb, x_star = desk_setup(mu=1e-2)
        bounds = estimate_bounds(prob)
        alpha = 0.02
        for e in (1, 2):
            cfg = AlgorithmConfig("inexact_music", StepSchedule.constant(alpha), E=e)
            trace = run(prob, graph, w, cfg, T=4000, x_star=x_star)
            est = fit_linear_rate(trace, window=50)
            assert est.rho <= (1.0 - bounds.mu_est * alpha) ** e * 1.1


class TestPlateau:
    def test_plateau_error_is_tail_minimum(self):
        recs = [TraceRecord(k, k, k, max(1e-6, 2.0 ** -k), 0.01) for k in range(1, 101)]
        assert plateau_error(Trace(records=recs)) == pytest.approx(1e-6)

    def test_reached_plateau_detects_flattening(self):
        flat = [TraceRecord(k, k, k, 1e-4, 0.01) for k in range(1, 101)]
        falling = [TraceRecord(k, k, k, 0.9**k, 0.01) for k in range(1, 101)]
        assert reached_plateau(Trace(records=flat))
        assert not reached_plateau(Trace(records=falling))

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError):
            plateau_error(Trace())


class TestRoundsToThreshold:
    def test_first_combination_row_wins(self):
        recs = [
            TraceRecord(1, 0, 1, 0.9, 0.01),
            TraceRecord(2, 1, 2, 0.5, 0.01),
            TraceRecord(3, 1, 3, 0.2, 0.01),  # inner row, must not count
            TraceRecord(4, 2, 4, 0.1, 0.01),
        ]
        trace = Trace(records=recs)
        assert rounds_to_threshold(trace, 0.6) == 1
        assert rounds_to_threshold(trace, 0.3) == 2
        assert rounds_to_threshold(trace, 1e-9) is None


class TestCompare:
    def test_identical_configs_identical_traces(self):
        prob, graph, w, wb, x_star = desk_setup()
        sched = StepSchedule.constant(0.01)
        configs = {
            "one": AlgorithmConfig("inexact_music", sched, E=2),
            "two": AlgorithmConfig("inexact_music", sched, E=2),
        }
        result = compare(prob, graph, configs, T=60, x_star=x_star)
        assert result.traces["one"].records == result.traces["two"].records

    def test_more_local_updates_need_fewer_rounds(self):
        prob, graph, w, wb, x_star = desk_setup()
        sched = StepSchedule.constant(0.01)
        configs = {
            "E1": AlgorithmConfig("inexact_music", sched, E=1),
            "E2": AlgorithmConfig("inexact_music", sched, E=2),
        }
        result = compare(
            prob, graph, configs, T=4000, x_star=x_star, target_error=1e-2
        )
        r1, r2 = result.rounds_to_target["E1"], result.rounds_to_target["E2"]
        assert r1 is not None and r2 is not None
        assert r2 <= r1

    def test_corrected_music_beats_exact_diffusion_in_rounds(self):
        prob, graph, w, wb, x_star = desk_setup()
        sched = StepSchedule.constant(0.02)
        configs = {
            "exact_diffusion": AlgorithmConfig("exact_diffusion", sched),
            "exact_music_E3": AlgorithmConfig("exact_music", sched, E=3, beta=1.0),
        }
        result = compare(
            prob, graph, configs, T=8000, x_star=x_star, target_error=1e-6
        )
        rd = result.rounds_to_target["exact_diffusion"]
        rm = result.rounds_to_target["exact_music_E3"]
        assert rd is not None and rm is not None
        assert rm < rd

    def test_divergent_config_does_not_poison_others(self):
        prob, graph, w, wb, x_star = desk_setup()
        configs = {
            "sane": AlgorithmConfig("atc", StepSchedule.constant(0.01)),
            "wild": AlgorithmConfig("atc", StepSchedule.constant(1e6)),
        }
        result = compare(prob, graph, configs, T=300, x_star=x_star)
        assert result.traces["wild"].terminal_status == "diverged"
        assert result.traces["sane"].terminal_status == "max_iters"
        assert len(result.traces["sane"].records) == 300
