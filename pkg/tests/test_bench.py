import math

from mixgap.bench import CSV_HEADER, bench_convergence, max_workers
from mixgap.fixtures import get_fixture


def parse_rows(csv_text):
    lines = csv_text.strip().splitlines()
    assert lines[0] == CSV_HEADER
    trials, medians = [], {}
    for line in lines[1:]:
        m, seed, point, err, hw, covered = line.split(",")
        if seed == "median":
            medians[int(m)] = (float(point), float(err), float(hw), float(covered))
        else:
            trials.append((int(m), int(seed), float(point), float(err), float(hw), int(covered)))
    return trials, medians


def test_row_count_contract():
    csv_text = bench_convergence(get_fixture("fast3"), m_grid=[500, 1000, 2000], seeds=4)
    trials, medians = parse_rows(csv_text)
    assert len(trials) == 12
    assert set(medians) == {500, 1000, 2000}


def test_median_error_decreases_in_m():
    csv_text = bench_convergence(get_fixture("fast3"), m_grid=[2000, 50_000], seeds=5)
    _, medians = parse_rows(csv_text)
    assert medians[50_000][1] < medians[2000][1]


def test_half_width_tracks_log_cubed_over_m_shape():
    # the half-width over sqrt(log^3 m / m) should stay within a x4 band
    # across the grid; needs a small c so the U term stays finite
    csv_text = bench_convergence(
        get_fixture("ex31"), m_grid=[100_000, 400_000], seeds=5, c=0.2
    )
    _, medians = parse_rows(csv_text)
    ratios = [
        medians[m][2] / math.sqrt(math.log(m) ** 3 / m) for m in (100_000, 400_000)
    ]
    assert max(ratios) / min(ratios) < 4.0


def test_parallel_workers_do_not_change_output(monkeypatch):
    P = get_fixture("fast3")
    serial = bench_convergence(P, m_grid=[500], seeds=4)
    monkeypatch.setenv("MIXGAP_THREADS", "2")
    assert max_workers() == 2
    parallel = bench_convergence(P, m_grid=[500], seeds=4)
    assert serial == parallel


def test_worker_env_parsing(monkeypatch):
    monkeypatch.setenv("MIXGAP_THREADS", "not-a-number")
    assert max_workers() == 1
    monkeypatch.delenv("MIXGAP_THREADS")
    assert max_workers() == 1
