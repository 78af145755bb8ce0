import math
import random

import numpy as np
import pytest

from polypack.generators import GenConfig, gen_atris, gen_jigsaw, gen_random
from polypack.geom import Polygon
from polypack.model import Instance, Item
from polypack.selection import (METRIC_NAMES, DegenerateFeatures,
                                SelectionConfig, compute_metrics,
                                features_csv, select_diverse,
                                select_from_features, _pca_project)

BOX = Polygon([(0, 0), (50, 0), (50, 50), (0, 50)])


def inst_of(polys, name="m", values=None):
    values = values or [1] * len(polys)
    return Instance(name, BOX, tuple(Item(p, v) for p, v in zip(polys, values)))


class TestMetrics:
    def test_single_item_log_zero(self):
        fv = compute_metrics(inst_of([Polygon([(0, 0), (2, 0), (2, 2), (0, 2)])]))
        assert fv[0] == 0.0

    def test_all_convex_items_zero_slack(self):
        polys = [Polygon([(0, 0), (3, 0), (3, 2), (0, 2)]),
                 Polygon([(0, 0), (4, 0), (2, 3)])]
        fv = compute_metrics(inst_of(polys))
        assert fv[1] == 0.0

    def test_concave_item_positive_slack(self):
        l_shape = Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
        fv = compute_metrics(inst_of([l_shape]))
        assert fv[1] > 0.0

    def test_atris_axis_alignment_is_one(self):
        for seed in range(5):
            inst = gen_atris(GenConfig(seed=seed, n_target=10))
            fv = compute_metrics(inst)
            assert fv[5] == 1.0

    def test_vector_length_and_names(self):
        fv = compute_metrics(inst_of([Polygon([(0, 0), (1, 0), (1, 1)])]))
        assert len(fv.values) == len(METRIC_NAMES) == 11
        assert all(math.isfinite(v) for v in fv.values)


def blob_features(rng, n_per_blob, centers, spread=0.5, dims=11):
    feats = []
    for b, center in enumerate(centers):
        for i in range(n_per_blob):
            vec = [center + rng.uniform(-spread, spread) for _ in range(dims)]
            feats.append((f"blob{b}_{i}", vec))
    return feats


class TestSelection:
    def test_k_equals_n_returns_everything(self):
        rng = random.Random(71)
        feats = blob_features(rng, 5, [0.0, 100.0])
        out = select_from_features(feats, SelectionConfig(k=10, seed=1))
        assert sorted(out) == sorted(name for name, _ in feats)

    def test_two_blobs_one_pick_each_100_seeds(self):
        rng = random.Random(72)
        feats = blob_features(rng, 20, [0.0, 1000.0])
        for seed in range(100):
            out = select_from_features(feats, SelectionConfig(k=2, seed=seed))
            assert len(out) == 2
            prefixes = {name.split("_")[0] for name in out}
            assert prefixes == {"blob0", "blob1"}

    def test_order_insensitive(self):
        rng = random.Random(73)
        feats = blob_features(rng, 12, [0.0, 30.0, 90.0])
        cfg = SelectionConfig(k=5, seed=3)
        base = select_from_features(feats, cfg)
        for _ in range(5):
            rng.shuffle(feats)
            assert select_from_features(feats, cfg) == base

    def test_output_distinct_and_from_input(self):
        rng = random.Random(74)
        feats = blob_features(rng, 30, [0.0, 5.0, 10.0, 20.0])
        names = {name for name, _ in feats}
        for k in (1, 7, 40):
            out = select_from_features(feats, SelectionConfig(k=k, seed=9))
            assert len(out) == k == len(set(out))
            assert set(out) <= names

    def test_duplicate_rows_still_fill_k(self):
        feats = [(f"dup{i}", [1.0, 2.0, 3.0 + (i % 2)]) for i in range(10)]
        with pytest.warns(UserWarning):  # two of the three columns are constant
            out = select_from_features(feats, SelectionConfig(k=4, seed=2))
        assert len(out) == len(set(out)) == 4

    def test_degenerate_all_constant(self):
        feats = [(f"c{i}", [1.0] * 11) for i in range(6)]
        with pytest.raises(DegenerateFeatures):
            select_from_features(feats, SelectionConfig(k=2, seed=1))

    def test_constant_column_dropped_with_warning(self):
        rng = random.Random(75)
        feats = [(f"x{i}", [5.0, rng.random(), rng.random()]) for i in range(12)]
        with pytest.warns(UserWarning, match="constant"):
            out = select_from_features(feats, SelectionConfig(k=3, seed=4))
        assert len(out) == 3

    def test_pca_variance_retained(self):
        rng = np.random.default_rng(42)
        base = rng.normal(size=(200, 3))
        mix = rng.normal(size=(3, 11))
        data = base @ mix + 0.01 * rng.normal(size=(200, 11))
        z = (data - data.mean(axis=0)) / data.std(axis=0)
        proj = _pca_project(z, 0)
        # auto-selected components keep >= 95% of the variance
        assert proj.shape[1] <= 11
        total_var = z.var(axis=0).sum()
        kept_var = proj.var(axis=0).sum()
        assert kept_var / total_var >= 0.95


class TestEndToEndSelection:
    def test_mixed_corpus_coverage(self):
        instances = []
        for seed in range(12):
            instances.append(gen_random(GenConfig(seed=seed, n_target=6)))
            instances.append(gen_jigsaw(GenConfig(seed=seed, jigsaw_line_count=4)))
            instances.append(gen_atris(GenConfig(seed=seed, n_target=8)))
        out = select_diverse(instances, SelectionConfig(k=9, seed=5))
        assert len(out) == len(set(out)) == 9
        names = {i.name for i in instances}
        assert set(out) <= names

    def test_features_csv_shape(self):
        instances = [gen_random(GenConfig(seed=s, n_target=5)) for s in range(3)]
        csv_text = features_csv(instances)
        lines = csv_text.strip().split("\n")
        assert lines[0].startswith("name,log_item_count")
        assert len(lines) == 4
        assert len(lines[1].split(",")) == 12
