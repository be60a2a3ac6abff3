import json
import random

import pytest

import hpcsocial as hs


def brute_matrix(jobs, c_job):
    users = []
    for u, _ in sorted(jobs, key=lambda r: (r[1], r[0])):
        if u not in users:
            users.append(u)
    times = {u: [t for v, t in jobs if v == u] for u in users}
    out = {}
    for a in users:
        for b in users:
            hit = sum(1 for x in times[a] if any(abs(x - y) < c_job for y in times[b]))
            out[a, b] = hit / len(times[a])
    return out


FOUR_JOBS = [("A", 0, None), ("B", 600, None), ("A", 1500, None), ("B", 4200, None)]


def test_hand_traced_fixture():
    stream = hs.JobStream(FOUR_JOBS)
    m = hs.compute_sim(stream, hs.Thresholds(1800, 0.5))
    assert m.users == ["A", "B"]
    assert m.to_list() == [[1.0, 1.0], [0.5, 1.0]]
    assert m.pair(1, 0) == (1, 2)
    g = hs.extract_followers(m, 0.5)
    assert hs.follower_counts(g) == [1, 2]
    assert hs.dominant_users(g) == ["B"]


def test_random_traces_match_python_oracle():
    rng = random.Random(11)
    th = hs.Thresholds(1800, 0.5)
    for _ in range(20):
        jobs = [(f"u{rng.randrange(6)}", rng.choice([0, 1800, 1799, rng.randrange(20000)])) for _ in range(60)]
        stream = hs.JobStream([(u, t, None) for u, t in jobs])
        m = hs.compute_sim(stream, th, threads=2)
        oracle = brute_matrix(jobs, 1800)
        for i, a in enumerate(m.users):
            for j, b in enumerate(m.users):
                assert m.value(i, j) == pytest.approx(oracle[a, b], abs=0, rel=1e-15)
        assert hs.replay(stream, th).snapshot().to_matrix() == m
        assert hs.compute_sim_naive(stream, th) == m


def test_online_state_round_trip():
    th = hs.Thresholds(1800, 0.5)
    s = hs.OnlineState(th)
    for u, t, _ in FOUR_JOBS[:2]:
        s.observe(u, t)
    resumed = hs.OnlineState.from_json(s.to_json())
    for u, t, _ in FOUR_JOBS[2:]:
        resumed.observe(u, t)
    assert resumed.follower_counts(0.5) == [1, 2]
    with pytest.raises(hs.ContractError):
        resumed.observe("A", 10)


def test_parsers_and_cdf():
    ds = hs.parse_delimited("user,time\na,0\nb,10\na,20\nc,40\n")
    stream = hs.normalize(ds)
    cdf = hs.interarrival_cdf(stream)
    assert cdf.values == [10, 20]
    assert hs.fraction_within(cdf, 10) == pytest.approx(2 / 3)
    with pytest.raises(hs.TraceError):
        hs.parse_swf("garbage\n")


def test_power_law_and_cosine():
    fit = hs.fit_power_law_points([1, 2, 4], [0.6, 0.3, 0.15])
    assert fit.a == pytest.approx(0.6, abs=1e-12)
    assert fit.b == pytest.approx(-1.0, abs=1e-12)
    assert hs.cosine_similarity([1, 2, 3], [1, 2, 3]) == 1.0
    with pytest.raises(hs.ConfigError):
        hs.fit_power_law(hs.follower_distribution([2, 2, 2]))


def test_synth_and_convergence():
    cfg = hs.SynthConfig()
    cfg.n_dominant = 2
    cfg.followers_fixed = 2
    cfg.echo_probability = 1.0
    cfg.duration = 5 * 86400
    cfg.seed = 4
    stream, truth = hs.generate(cfg)
    again, _ = hs.generate(cfg)
    assert stream == again
    edges = json.loads(truth)["edges"]
    g = hs.extract_followers(hs.compute_sim(stream, hs.Thresholds()), 0.5)
    found = {(f, d) for f, d, _ in g.edges}
    assert all((e["follower"], e["dominant"]) in found for e in edges)

    series = hs.convergence_run(stream, hs.Thresholds(), checkpoints=9)
    assert len(series.points) == 10
    assert series.points[-1].cosine == 1.0


def test_run_cli(tmp_path):
    trace = tmp_path / "t.csv"
    trace.write_text("user,time\nA,0\nB,600\nA,1500\nB,4200\n")
    code, _, err = hs.run_cli(["analyze", "-i", str(trace), "-o", str(tmp_path / "out")])
    assert code == 0, err
    assert (tmp_path / "out" / "follower_counts_cu50.csv").read_text() == "user,followers\nA,1\nB,2\n"
    code, _, _ = hs.run_cli(["analyze", "-i", str(trace), "--c-user", "2"])
    assert code == 2
