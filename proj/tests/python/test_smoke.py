"""Smoke tests for the Python bindings and the CLI binary.

The build stages the package under <build>/python and exports the CLI path in
RHBM_CLI; both are wired up by ctest.
"""

import math
import os
import subprocess
import sys

import pytest

rhbm = pytest.importorskip("rhbm")


def test_mixing_matrix_shape_and_total():
    f = rhbm.build_normalized_mixing(4, 0.5, 1.0)
    assert f.n == 4
    assert f.total() == pytest.approx(2.0)
    rows = f.rows()
    assert rows[0][0] == pytest.approx(1.5 / 4)
    scaled = rhbm.scale_mixing_to_edges(f, 100, 6.0)
    assert scaled.total() == pytest.approx(600.0)


def test_partition_and_validation():
    part = rhbm.make_partition(10, 3)
    assert part.num_blocks == 3
    assert [part.block_size(b) for b in range(3)] == [4, 3, 3]

    targets = rhbm.scale_mixing_to_edges(rhbm.build_normalized_mixing(3, 0.0, 1.0), 10, 3.0)
    rng = rhbm.Rng(7)
    shares = rhbm.sample_fitness(part, 2.5, rng)
    report = rhbm.validate_targets(targets, part, shares)
    assert report.ok()


def test_calibrate_sample_measure_roundtrip():
    n, blocks, kbar = 120, 3, 6.0
    part = rhbm.make_partition(n, blocks)
    targets = rhbm.scale_mixing_to_edges(rhbm.build_normalized_mixing(blocks, 0.5, 1.0), n, kbar)
    shares = rhbm.sample_fitness(part, 2.5, rhbm.Rng(1))
    theta = rhbm.sample_angles(n, rhbm.Rng(2))

    state, report = rhbm.calibrate(theta, shares, targets, 2.0, rhbm.default_radius(n), part)
    assert report.converged
    assert report.max_degree_residual <= 1e-2

    graph = rhbm.sample_graph(state, seed=99)
    assert graph.num_nodes == n
    again = rhbm.sample_graph(state, seed=99)
    assert graph.edges == again.edges
    blockwise = rhbm.sample_graph_blockwise(state, seed=99)
    assert blockwise.edges == graph.edges

    stats = rhbm.compute_stats(graph, part)
    assert stats.mean_degree == pytest.approx(2.0 * graph.num_edges / n)
    assert sum(rhbm.degree_sequence(graph)) == 2 * graph.num_edges
    assert 0.0 <= stats.global_clustering <= 1.0

    err = rhbm.mixing_relative_error(stats.mixing, targets)
    assert err < 0.8  # tiny graph, loose sanity bound


def test_kernel_closed_form():
    r = 10.0
    a = math.pi * r
    assert rhbm.angular_connection_kernel(a, 2.0, r) == pytest.approx(math.pi / 4)
    with pytest.raises(ValueError):
        rhbm.angular_connection_kernel(1.0, 0.9, r)


def test_embedding_round_trip(tmp_path):
    n = 30
    rng = rhbm.Rng(5)
    kappa = rhbm.sample_hidden_degrees(n, 2.5, 5.0, rng)
    theta = rhbm.sample_angles(n, rng)
    params = rhbm.S1Params(kappa, 2.0, rhbm.s1_default_mu(2.0, 5.0), rhbm.default_radius(n))
    emb = rhbm.embedding_from_s1(params, theta)

    path = tmp_path / "embedding.csv"
    rhbm.save_embedding(emb, path)
    back = rhbm.load_embedding(path)
    assert back.dimension == 1
    assert back.kappa == pytest.approx(emb.kappa)

    p01 = rhbm.sd_edge_probability(back, 0, 1)
    assert p01 == pytest.approx(rhbm.s1_edge_probability(params, theta, 0, 1), abs=1e-9)

    graphs = rhbm.sample_graphs_from_embedding(back, 2, 11)
    assert len(graphs) == 2


def cli_path():
    path = os.environ.get("RHBM_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("RHBM_CLI is not set")
    return path


def run_cli(*args):
    return subprocess.run([cli_path(), *args], capture_output=True, text=True)


def test_cli_help():
    for sub in ("generate", "sweep", "stats", "eval-embedding"):
        proc = run_cli(sub, "--help")
        assert proc.returncode == 0
        assert sub in proc.stdout


def test_cli_generate_stats_and_reproducibility(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    base = [
        "generate",
        "--nodes", "150",
        "--communities", "3",
        "--avg-degree", "6",
        "--seed", "7",
    ]
    proc_a = run_cli(*base, "--out", str(out_a))
    assert proc_a.returncode == 0, proc_a.stderr
    proc_b = run_cli(*base, "--out", str(out_b))
    assert proc_b.returncode == 0, proc_b.stderr

    for name in (
        "mixing_target.csv",
        "partition.csv",
        "latent_state.csv",
        "calibration_report.txt",
        "edges.txt",
        "stats.csv",
    ):
        assert (out_a / name).exists(), name

    # Identical config and seed: byte-identical edge lists.
    assert (out_a / "edges.txt").read_bytes() == (out_b / "edges.txt").read_bytes()

    # stats on the generated graph reproduces the stats generate wrote.
    stats_dir = tmp_path / "stats"
    proc = run_cli("stats", str(out_a / "edges.txt"), str(out_a / "partition.csv"),
                   "--out", str(stats_dir))
    assert proc.returncode == 0, proc.stderr
    assert (stats_dir / "stats.csv").read_text() == (out_a / "stats.csv").read_text()


def test_cli_generate_single_block(tmp_path):
    out = tmp_path / "single"
    proc = run_cli("generate", "--nodes", "60", "--communities", "1", "--rho", "1",
                   "--avg-degree", "4", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    matrix_rows = [l for l in (out / "mixing_target.csv").read_text().splitlines()
                   if l and not l.startswith("#")]
    assert len(matrix_rows) == 1  # 1x1 mixing target

    # n=1 admits only rho=1.
    proc = run_cli("generate", "--nodes", "60", "--communities", "1", "--rho", "0",
                   "--out", str(tmp_path / "bad"))
    assert proc.returncode != 0


def test_cli_stats_empty_edge_list(tmp_path):
    part = rhbm.make_partition(5, 2)
    partition = tmp_path / "partition.csv"
    edges = tmp_path / "edges.txt"
    rhbm.save_partition(part, partition)
    edges.write_text("")
    proc = run_cli("stats", str(edges), str(partition), "--out", str(tmp_path / "stats"))
    assert proc.returncode == 0, proc.stderr
    row = (tmp_path / "stats" / "stats.csv").read_text().splitlines()[1]
    nodes, n_edges, mean_deg, glob, loc, isolated = row.split(",")
    assert (nodes, n_edges, isolated) == ("5", "0", "5")
    assert float(mean_deg) == 0.0 and float(glob) == 0.0 and float(loc) == 0.0


def test_cli_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("nodes=120\ncommunities=4\navg-degree=5\nseed=2\n")
    out = tmp_path / "out"
    proc = run_cli("generate", "--config", str(cfg), "--communities", "2",
                   "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    stats = (out / "stats.csv").read_text().splitlines()[1]
    assert stats.startswith("120,")  # nodes from the file
    matrix_rows = [l for l in (out / "mixing_target.csv").read_text().splitlines()
                   if l and not l.startswith("#")]
    assert len(matrix_rows) == 2  # flag overrides the file


def test_cli_infeasible_targets_exit_code(tmp_path):
    # A 2-node block cannot host 100 intra edges: exit code 2.
    proc = run_cli(
        "generate",
        "--nodes", "4",
        "--communities", "2",
        "--avg-degree", "50",
        "--out", str(tmp_path / "bad"),
    )
    assert proc.returncode == 2
    assert "infeasible" in proc.stderr


def test_cli_sweep_table(tmp_path):
    table = tmp_path / "sweep.csv"
    proc = run_cli(
        "sweep",
        "--param", "beta",
        "--values", "2,5",
        "--seeds", "2",
        "--nodes", "100",
        "--communities", "2",
        "--avg-degree", "5",
        "--table", str(table),
    )
    assert proc.returncode == 0, proc.stderr
    lines = table.read_text().strip().splitlines()
    assert lines[0].startswith("parameter,value,seed")
    assert len(lines) == 1 + 2 * 2  # header + |values| x seeds
    assert all(",true," in line or ",false," in line for line in lines[1:])


def test_cli_sweep_parallel_matches_sequential(tmp_path):
    args = [
        "sweep",
        "--param", "q",
        "--values", "0.5,1",
        "--seeds", "2",
        "--nodes", "80",
        "--communities", "2",
        "--avg-degree", "4",
    ]
    seq = tmp_path / "seq.csv"
    par = tmp_path / "par.csv"
    assert run_cli(*args, "--table", str(seq)).returncode == 0
    assert run_cli(*args, "--parallel", "--table", str(par)).returncode == 0

    def strip_wall(path):
        rows = path.read_text().strip().splitlines()
        return [",".join(r.split(",")[:-1]) for r in rows]  # drop wall_seconds

    assert strip_wall(seq) == strip_wall(par)


def test_cli_eval_embedding(tmp_path):
    n = 80
    rng = rhbm.Rng(3)
    kappa = rhbm.sample_hidden_degrees(n, 2.5, 6.0, rng)
    theta = rhbm.sample_angles(n, rng)
    params = rhbm.S1Params(kappa, 2.0, rhbm.s1_default_mu(2.0, 6.0), rhbm.default_radius(n))
    graph = rhbm.sample_s1_graph(params, theta, 17)
    emb = rhbm.embedding_from_s1(params, theta)
    part = rhbm.make_partition(n, 4)

    edges = tmp_path / "edges.txt"
    partition = tmp_path / "partition.csv"
    embedding = tmp_path / "embedding.csv"
    rhbm.save_edge_list(graph, edges)
    rhbm.save_partition(part, partition)
    rhbm.save_embedding(emb, embedding)

    proc = run_cli("eval-embedding", str(edges), str(partition), str(embedding),
                   "--samples", "3", "--out", str(tmp_path / "eval"))
    assert proc.returncode == 0, proc.stderr
    header, row = (tmp_path / "eval" / "evaluation.csv").read_text().strip().splitlines()
    assert header.startswith("D,mixing_rel_error")
    assert int(row.split(",")[0]) == 1

    # Node-set mismatch is a hard error.
    small = rhbm.make_partition(n - 1, 4)
    rhbm.save_partition(small, partition)
    proc = run_cli("eval-embedding", str(edges), str(partition), str(embedding))
    assert proc.returncode == 1
