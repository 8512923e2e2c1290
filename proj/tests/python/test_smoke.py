import os

import pytest

try:
    import kahfm as m
except ImportError:
    m = pytest.importorskip("_kahfm")

DATA = os.environ.get("KAHFM_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data", "example"))


@pytest.fixture(scope="module")
def options():
    o = m.PipelineOptions()
    o.interactions_path = os.path.join(DATA, "interactions.tsv")
    o.triples_path = os.path.join(DATA, "triples.tsv")
    o.hyper.iterations = 5
    o.seed = 42
    return o


@pytest.fixture(scope="module")
def prepared(options):
    return m.prepare(options)


def test_load_interactions():
    ds = m.load_interactions(os.path.join(DATA, "interactions.tsv"))
    assert ds.num_users > 0
    assert ds.num_items > 0
    assert ds.num_interactions > 0


def test_prepare_shapes(prepared):
    assert prepared.dataset.num_users == 30
    assert prepared.dataset.num_items == 40
    assert len(prepared.table) > 0
    assert prepared.feature_average >= 1.0
    train = prepared.split.train
    test = prepared.split.test
    assert train.num_interactions + test.num_interactions == prepared.dataset.num_interactions


def test_train_and_score(prepared, options):
    model = m.train_model(prepared, options)
    assert len(model.trace) == 5
    assert model.params.k == len(prepared.table)
    row = model.params.item_row(0, prepared.dataset.num_users)
    assert len(row) == model.params.k

    again = m.train_model(prepared, options)
    assert model.params.item_row(0, prepared.dataset.num_users) == row == again.params.item_row(
        0, prepared.dataset.num_users
    )


def test_recommend_and_evaluate(prepared, options):
    lists = m.run_system(prepared, options)
    assert len(lists) == prepared.dataset.num_users
    rated = prepared.split.train.user_items()
    for u, recs in enumerate(lists):
        items = [i for i, _ in recs]
        assert len(items) == len(set(items))
        assert not set(items) & set(rated[u])
        scores = [s for _, s in recs]
        assert scores == sorted(scores, reverse=True)

    report = m.evaluate(prepared, options)
    assert report.users_evaluated > 0
    assert 0.0 <= report.precision <= 1.0
    assert 0.0 <= report.ndcg <= 1.0
    assert "precision@" in report.to_text()


def test_interpretability(prepared, options):
    model = m.train_model(prepared, options)
    values = [m.semantic_accuracy(prepared, options, model, n) for n in (1, 2, 3)]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert values == sorted(values)

    rob = m.robustness(prepared, options, 1)
    assert 0.0 <= rob <= 1.0


def test_save_model(prepared, options, tmp_path):
    model = m.train_model(prepared, options)
    path = tmp_path / "model.bin"
    m.save_model(model, prepared, options, str(path))
    assert path.stat().st_size > 0
    assert path.read_bytes().startswith(b"KAHFM-MODEL")
