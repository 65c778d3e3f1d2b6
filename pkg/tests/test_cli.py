import json
import subprocess
import sys

import numpy as np
import pytest

from cxprecode.cli import (
    ExperimentConfig,
    inspect_weights,
    load_channel,
    load_weights,
    main,
    resolve_config,
    run_eval,
    run_sweep_snr,
    run_sweep_users,
    run_train,
    save_weights,
)
from cxprecode.errors import ConfigError

FAST_OVERRIDES = {
    "training": {"max_epochs": 15},
    "eval": {
        "n_symbols": 10**4,
        "n_channel_trials": 2,
        "snr_db_list": [-8.0, -4.0, 0.0],
        "sweep_k": 2,
    },
}


def fast_config(seed=5, **extra):
    d = json.loads(json.dumps(FAST_OVERRIDES))
    for section, table in extra.items():
        d.setdefault(section, {}).update(table)
    return resolve_config("desk", file_dict=d, seed=seed)


class TestResolveConfig:
    def test_profiles_resolve(self):
        for profile in ("desk", "paper"):
            cfg = resolve_config(profile)
            assert isinstance(cfg, ExperimentConfig)

    def test_rf_chain_shortage_rejected_before_compute(self):
        with pytest.raises(ConfigError, match="n_rf"):
            resolve_config("desk", file_dict={"channel": {"n_users": 9}})

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            resolve_config("desk", file_dict={"typo_section": {}})

    def test_small_symbol_count_rejected(self):
        with pytest.raises(ConfigError, match="n_symbols"):
            resolve_config("desk", file_dict={"eval": {"n_symbols": 100}})

    def test_overrides_apply(self):
        cfg = resolve_config("desk", seed=99, out_dir="/tmp/x", threads=3)
        assert (cfg.seed, cfg.out_dir, cfg.threads) == (99, "/tmp/x", 3)

    def test_materialized_roundtrip(self):
        cfg = fast_config()
        again = resolve_config(cfg.profile, file_dict=cfg.to_dict())
        assert again == cfg


class TestWeightFile:
    def test_round_trip_bit_identical(self, tmp_path):
        cfg = fast_config()
        w, _ = run_train(cfg, tmp_path / "a")
        first = (tmp_path / "a" / "weights.json").read_bytes()
        w2, net, digest = load_weights(tmp_path / "a" / "weights.json")
        assert np.array_equal(w.w1, w2.w1)
        assert np.array_equal(w.w2, w2.w2)
        save_weights(w2, net, digest, tmp_path / "b.json")
        assert (tmp_path / "b.json").read_bytes() == first

    def test_inspect_reports_shape(self, tmp_path):
        cfg = fast_config()
        run_train(cfg, tmp_path)
        info = inspect_weights(tmp_path / "weights.json")
        assert info["net"]["n_t"] == 32
        assert info["w1_fro"] > 0


class TestRunTrain:
    def test_persists_artifacts(self, tmp_path):
        cfg = fast_config()
        _, history = run_train(cfg, tmp_path)
        assert (tmp_path / "weights.json").exists()
        assert (tmp_path / "history.csv").exists()
        assert (tmp_path / "config.json").exists()
        assert (tmp_path / "channel.json").exists()
        lines = (tmp_path / "history.csv").read_text().splitlines()
        assert lines[0] == "epoch,train_cost,test_cost"
        assert len(lines) == history.epochs + 1

    def test_channel_file_roundtrip_bit_exact(self, tmp_path):
        from cxprecode import sample_channel, stream_rng

        cfg = fast_config()
        run_train(cfg, tmp_path)
        loaded = load_channel(tmp_path / "channel.json")
        from cxprecode.cli import derived_seed

        original = sample_channel(
            cfg.channel, stream_rng(derived_seed(cfg.seed, "channel"), "channel")
        )
        assert np.array_equal(loaded.h, original.h)
        assert np.array_equal(loaded.beta, original.beta)

    def test_paper_profile_run_completes(self, tmp_path):
        # full-size configuration: 128 antennas, 16 RF chains, 80 rays,
        # 100 training samples, 200 epochs
        cfg = resolve_config("paper", seed=2)
        _, history = run_train(cfg, tmp_path)
        assert history.epochs <= 200
        assert (tmp_path / "weights.json").exists()
        assert history.test_cost[-1] < history.initial_test_cost

    def test_rerun_with_persisted_config_identical(self, tmp_path):
        cfg = fast_config()
        run_train(cfg, tmp_path / "a")
        persisted = json.loads((tmp_path / "a" / "config.json").read_text())
        cfg2 = resolve_config(persisted["profile"], file_dict=persisted)
        run_train(cfg2, tmp_path / "b")
        assert (tmp_path / "a" / "weights.json").read_bytes() == (
            tmp_path / "b" / "weights.json"
        ).read_bytes()
        assert (tmp_path / "a" / "history.csv").read_bytes() == (
            tmp_path / "b" / "history.csv"
        ).read_bytes()


class TestSweepUsers:
    def test_row_shape_and_ordering(self, tmp_path):
        cfg = fast_config()
        rows = run_sweep_users(cfg, [2, 3], tmp_path)
        assert len(rows) == 6  # (k, method) pairs
        by_key = {(r[0], r[1]): r for r in rows}
        for k in (2, 3):
            assert by_key[(k, "zf")][2] >= by_key[(k, "nn")][2]

    def test_aggregates_recompute_from_trial_csv(self, tmp_path):
        cfg = fast_config()
        rows = run_sweep_users(cfg, [2], tmp_path)
        trial_lines = (tmp_path / "users_sweep_trials.csv").read_text().splitlines()
        header = trial_lines[0].split(",")
        idx = {name: header.index(name) for name in ("k", "method", "status", "se")}
        for k, method, se_mean, _, trials in rows:
            vals = [
                float(line.split(",")[idx["se"]])
                for line in trial_lines[1:]
                if line.split(",")[idx["k"]] == str(k)
                and line.split(",")[idx["method"]] == method
                and line.split(",")[idx["status"]] == "ok"
            ]
            assert len(vals) == trials
            assert np.mean(vals) == pytest.approx(se_mean, rel=1e-15)

    def test_k_bounds_validated(self, tmp_path):
        cfg = fast_config()
        with pytest.raises(ConfigError):
            run_sweep_users(cfg, [9], tmp_path)
        with pytest.raises(ConfigError):
            run_sweep_users(cfg, [], tmp_path)


class TestSweepSnr:
    def test_schema_and_monotone_zf(self, tmp_path):
        cfg = fast_config()
        rows = run_sweep_snr(cfg, None, tmp_path)
        assert len(rows) == 9  # 3 SNRs x 3 methods
        zf = [(r[0], r[2], r[3]) for r in rows if r[1] == "zf"]
        zf.sort()
        # non-increasing within 3-sigma binomial noise
        for (s1, b1, n1), (s2, b2, n2) in zip(zf, zf[1:]):
            sigma = np.sqrt(max(b1, 1e-12) * (1 - b1) / (2 * n1))
            assert b2 <= b1 + 3 * sigma

    def test_empty_snr_list_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_sweep_snr(fast_config(), [], tmp_path)

    def test_empty_method_list_rejected(self):
        with pytest.raises(ConfigError, match="methods"):
            fast_config(eval={"methods": []})

    def test_method_subset_skips_training(self, tmp_path):
        cfg = fast_config(eval={"methods": ["zf"]})
        rows = run_sweep_snr(cfg, [0.0], tmp_path)
        assert [r[1] for r in rows] == ["zf"]

    def test_determinism_bytes(self, tmp_path):
        cfg = fast_config(seed=6)
        run_sweep_snr(cfg, [-6.0, 0.0], tmp_path / "a")
        run_sweep_snr(cfg, [-6.0, 0.0], tmp_path / "b")
        for name in ("snr_sweep.csv", "snr_sweep_trials.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()

    def test_thread_pool_matches_sequential(self, tmp_path):
        import dataclasses

        cfg = fast_config(seed=7)
        run_sweep_snr(cfg, [0.0], tmp_path / "seq")
        cfg2 = dataclasses.replace(cfg, threads=2)
        run_sweep_snr(cfg2, [0.0], tmp_path / "par")
        assert (tmp_path / "seq" / "snr_sweep.csv").read_bytes() == (
            tmp_path / "par" / "snr_sweep.csv"
        ).read_bytes()


class TestRunEval:
    def test_eval_writes_user_rows(self, tmp_path):
        cfg = fast_config()
        run_train(cfg, tmp_path / "t")
        rows = run_eval(cfg, tmp_path / "t" / "weights.json", tmp_path / "e")
        assert len(rows) == 4  # desk profile has 4 users
        assert all(r[1] >= 0 and 0 <= r[2] <= 1 for r in rows)

    def test_eval_feed_path(self, tmp_path):
        cfg = fast_config()
        run_train(cfg, tmp_path / "t")
        rows = run_eval(cfg, tmp_path / "t" / "weights.json", tmp_path / "f",
                        ber_path="feed")
        assert all(r[6] == "feed" and 0 <= r[2] <= 1 for r in rows)


class TestMainEntry:
    def test_cli_roundtrip_with_config_file(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(FAST_OVERRIDES))
        rc = main([
            "--config", str(cfg_path), "--seed", "5",
            "--out", str(tmp_path / "run"), "train",
        ])
        assert rc == 0
        assert (tmp_path / "run" / "weights.json").exists()

    def test_invalid_config_exits_nonzero(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"channel": {"n_users": 99}}))
        assert main(["--config", str(cfg_path), "train"]) == 2

    def test_module_invocation(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(FAST_OVERRIDES))
        proc = subprocess.run(
            [sys.executable, "-m", "cxprecode", "--config", str(cfg_path),
             "--seed", "3", "--out", str(tmp_path / "m"), "train"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        assert (tmp_path / "m" / "history.csv").exists()

    def test_inspect_weights_command(self, tmp_path):
        cfg = fast_config()
        run_train(cfg, tmp_path)
        rc = main(["inspect-weights", "--weights", str(tmp_path / "weights.json")])
        assert rc == 0
