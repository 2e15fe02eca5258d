import json

import numpy as np
import pytest

from qclust.dataio import (
    CirclesSpec,
    Dataset,
    ParseError,
    format_tsplib,
    gen_circles,
    load_wbc_csv,
    parse_tsplib,
    read_clustering,
    write_clustering,
)
from qclust.qhca import Clustering
from qclust.svg import emit_svg_scatter

MINIMAL_TSP = """NAME: pair
TYPE: TSP
DIMENSION: 2
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0.5 1.25
2 3.0 -2.0
EOF
"""

WBC_ROWS = """1000025,5,1,1,1,2,1,3,1,1,2
1002945,5,4,4,5,7,10,3,2,1,2
1015425,3,1,1,1,2,2,3,1,1,2
1017122,8,10,10,8,7,10,9,7,1,4
1057013,8,4,5,1,2,?,7,3,1,4
1096800,6,6,6,9,6,?,7,8,1,2
"""


class TestParseTsplib:
    def test_minimal_two_node_file(self):
        dataset = parse_tsplib(MINIMAL_TSP)
        assert dataset.name == "pair"
        assert dataset.n_points == 2
        np.testing.assert_array_equal(dataset.points, [[0.5, 1.25], [3.0, -2.0]])

    def test_spaced_header_keys_accepted(self):
        text = MINIMAL_TSP.replace("DIMENSION:", "DIMENSION :")
        assert parse_tsplib(text).n_points == 2

    def test_dimension_mismatch_reports_row_section(self):
        text = MINIMAL_TSP.replace("DIMENSION: 2", "DIMENSION: 3")
        with pytest.raises(ParseError, match="DIMENSION 3 but 2"):
            parse_tsplib(text)

    def test_missing_coord_section(self):
        with pytest.raises(ParseError, match="NODE_COORD_SECTION"):
            parse_tsplib("NAME: x\nDIMENSION: 1\nEDGE_WEIGHT_TYPE: EUC_2D\n")

    def test_non_numeric_coordinate_reports_line(self):
        text = MINIMAL_TSP.replace("3.0 -2.0", "3.0 oops")
        with pytest.raises(ParseError, match="line 7"):
            parse_tsplib(text)

    def test_non_euclidean_rejected(self):
        text = MINIMAL_TSP.replace("EUC_2D", "GEO")
        with pytest.raises(ParseError, match="GEO"):
            parse_tsplib(text)

    def test_empty_stream_rejected(self):
        with pytest.raises(ParseError, match="empty"):
            parse_tsplib("\n\n")

    def test_round_trip_preserves_coordinates(self):
        rng = np.random.default_rng(20)
        dataset = Dataset(name="rt", points=rng.uniform(-500, 700, size=(40, 2)))
        again = parse_tsplib(format_tsplib(dataset))
        np.testing.assert_array_equal(again.points, dataset.points)


class TestLoadWbc:
    def test_first_published_row(self):
        dataset = load_wbc_csv(WBC_ROWS.splitlines()[0] + "\n")
        np.testing.assert_array_equal(dataset.points, [[5, 1, 1, 1, 2, 1, 3, 1, 1]])
        assert dataset.labels.tolist() == [1]  # class 2 = benign = positive

    def test_drop_policy_removes_missing_rows(self):
        dataset = load_wbc_csv(WBC_ROWS, missing_policy="drop")
        assert dataset.n_points == 4
        assert np.all((dataset.points >= 1) & (dataset.points <= 10))
        assert dataset.labels.tolist() == [1, 1, 1, 0]

    def test_impute_mode_fills_column_mode(self):
        dataset = load_wbc_csv(WBC_ROWS, missing_policy="impute-mode")
        assert dataset.n_points == 6
        # column 6 (bare nuclei) present values: 1, 10, 2, 10 -> mode 10
        assert dataset.points[4][5] == 10.0
        assert dataset.points[5][5] == 10.0

    def test_impute_mode_tie_takes_smallest(self):
        rows = "1,1,1,1,1,1,3,1,1,1,2\n2,1,1,1,1,1,5,1,1,1,2\n3,1,1,1,1,1,?,1,1,1,2\n"
        dataset = load_wbc_csv(rows, missing_policy="impute-mode")
        assert dataset.points[2][5] == 3.0

    def test_malignant_maps_negative(self):
        dataset = load_wbc_csv("99,1,1,1,1,1,1,1,1,1,4\n")
        assert dataset.labels.tolist() == [0]

    def test_malformed_row_reports_number(self):
        with pytest.raises(ParseError, match="row 2"):
            load_wbc_csv("1,1,1,1,1,1,1,1,1,1,2\n5,1,1\n")

    def test_unknown_class_code(self):
        with pytest.raises(ParseError, match="class code 7"):
            load_wbc_csv("1,1,1,1,1,1,1,1,1,1,7\n")

    def test_non_integer_attribute(self):
        with pytest.raises(ParseError, match="row 1"):
            load_wbc_csv("1,a,1,1,1,1,1,1,1,1,2\n")

    def test_empty_stream(self):
        with pytest.raises(ParseError, match="empty"):
            load_wbc_csv("")

    def test_unknown_policy(self):
        with pytest.raises(ValueError, match="policy"):
            load_wbc_csv(WBC_ROWS, missing_policy="zero-fill")


class TestGenCircles:
    def test_noiseless_points_sit_on_both_radii(self):
        dataset = gen_circles(CirclesSpec(n_samples=4, factor=0.5, noise_sigma=0.0, seed=0))
        radii = np.linalg.norm(dataset.points, axis=1)
        np.testing.assert_allclose(radii[:2], 1.0, atol=1e-12)
        np.testing.assert_allclose(radii[2:], 0.5, atol=1e-12)
        assert dataset.labels.tolist() == [0, 0, 1, 1]

    def test_seed_determinism(self):
        spec = CirclesSpec(n_samples=50, factor=0.4, noise_sigma=0.1, seed=123)
        np.testing.assert_array_equal(gen_circles(spec).points, gen_circles(spec).points)

    def test_odd_sample_count_split(self):
        dataset = gen_circles(CirclesSpec(n_samples=5, factor=0.5, noise_sigma=0.0, seed=1))
        assert dataset.labels.tolist() == [0, 0, 1, 1, 1]

    def test_factor_bounds_enforced(self):
        with pytest.raises(ValueError, match="factor"):
            CirclesSpec(n_samples=10, factor=1.5, noise_sigma=0.0, seed=0)

    def test_label_banded_distances(self):
        dataset = gen_circles(CirclesSpec(n_samples=400, factor=0.5, noise_sigma=0.1, seed=19))
        radii = np.linalg.norm(dataset.points, axis=1)
        assert radii[dataset.labels == 0].mean() > radii[dataset.labels == 1].mean()


class TestWriteClustering:
    def test_round_trip_assignments(self, tmp_path):
        dataset = Dataset(name="t", points=np.array([[0.1, 0.2], [1.5, -0.25], [3.0, 4.0]]),
                          labels=np.array([0, 1, 1]))
        clustering = Clustering(clusters=[(0, [0, 1]), (1, [2])],
                                params={"algorithm": "qhca", "scale": 1.0})
        out = tmp_path / "run.csv"
        write_clustering(clustering, dataset, out)
        assert read_clustering(out) == {0: 0, 1: 0, 2: 1}

    def test_header_and_sidecar(self, tmp_path):
        dataset = Dataset(name="t", points=np.array([[0.0, 0.0]]))
        clustering = Clustering(clusters=[(0, [0])], params={"algorithm": "unsharp"})
        out = tmp_path / "run.csv"
        write_clustering(clustering, dataset, out)
        text = out.read_text()
        assert text.splitlines()[0] == "point_id,x0,x1,cluster"
        sidecar = json.loads((tmp_path / "run.json").read_text())
        assert sidecar["algorithm"] == "unsharp"

    def test_true_label_column_present_when_labeled(self, tmp_path):
        dataset = Dataset(name="t", points=np.zeros((2, 1)), labels=np.array([1, 0]))
        clustering = Clustering(clusters=[(0, [0, 1])])
        out = tmp_path / "run.csv"
        write_clustering(clustering, dataset, out)
        lines = out.read_text().splitlines()
        assert lines[0].endswith(",true_label")
        assert lines[1].split(",")[-1] == "1"

    def test_byte_determinism(self, tmp_path):
        rng = np.random.default_rng(2)
        dataset = Dataset(name="t", points=rng.normal(size=(10, 2)))
        clustering = Clustering(clusters=[(0, list(range(10)))], params={"seed": 3})
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_clustering(clustering, dataset, a)
        write_clustering(clustering, dataset, b)
        assert a.read_bytes() == b.read_bytes()

    def test_incomplete_clustering_rejected(self, tmp_path):
        dataset = Dataset(name="t", points=np.zeros((3, 1)))
        clustering = Clustering(clusters=[(0, [0, 1])])
        with pytest.raises(ValueError, match="cover"):
            write_clustering(clustering, dataset, tmp_path / "x.csv")


class TestEmitSvg:
    def test_circle_count_and_fill_colors(self, tmp_path):
        dataset = Dataset(name="t", points=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        clustering = Clustering(clusters=[(0, [0, 1]), (1, [2])])
        out = tmp_path / "plot.svg"
        emit_svg_scatter(dataset, clustering, out)
        text = out.read_text()
        assert text.count("<circle") == 3
        fills = {part.split('"')[0] for part in text.split('fill="')[1:] if part[0] == "#"}
        assert len(fills) == 2

    def test_byte_determinism(self, tmp_path):
        rng = np.random.default_rng(4)
        dataset = Dataset(name="t", points=rng.normal(size=(12, 2)))
        clustering = Clustering(clusters=[(0, list(range(6))), (1, list(range(6, 12)))])
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        emit_svg_scatter(dataset, clustering, a)
        emit_svg_scatter(dataset, clustering, b)
        assert a.read_bytes() == b.read_bytes()

    def test_non_2d_rejected_with_pca_hint(self, tmp_path):
        dataset = Dataset(name="t", points=np.zeros((4, 5)))
        clustering = Clustering(clusters=[(0, list(range(4)))])
        with pytest.raises(ValueError, match="PCA"):
            emit_svg_scatter(dataset, clustering, tmp_path / "x.svg")

    def test_min_max_ticks_present(self, tmp_path):
        dataset = Dataset(name="t", points=np.array([[-2.0, 1.0], [4.0, 7.0]]))
        clustering = Clustering(clusters=[(0, [0, 1])])
        out = tmp_path / "plot.svg"
        emit_svg_scatter(dataset, clustering, out)
        text = out.read_text()
        for tick in ("-2.000", "4.000", "1.000", "7.000"):
            assert tick in text
