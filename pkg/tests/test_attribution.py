import json
import random

import numpy as np
import pytest

from attribeval.attribution import (
    AttributionMethod,
    ContextWindow,
    ScoreMatrix,
    SentenceRef,
    attribution_sets,
    builtin_lexical_scorer,
    candidate_pool,
    context_window,
    load_matrix,
    neutrality,
    rank_topk,
    reduce_matrix,
    reduction_experiment,
    save_matrix,
    score_matrix,
    summac_score,
)
from attribeval.corpus import (
    Dataset,
    Document,
    Sentence,
    Stream,
    Topic,
    doc_sentence_index,
    topic_sentences,
)
from attribeval.lexical import LexicalScorer, embed_text, entail_probability
from attribeval.summarize import SummaryMethod, extract_summary, make_summary_record


def refs(n, doc="p"):
    return tuple(SentenceRef(doc, i) for i in range(n))


def nli_matrix(cells, doc="p"):
    """cells: rows x cols x 3 nested lists."""
    values = np.asarray(cells, dtype=np.float64)
    return ScoreMatrix(
        method=AttributionMethod.NLI,
        summary_refs=refs(values.shape[0], "s"),
        doc_refs=refs(values.shape[1], doc),
        values=values,
    )


def pure_neutral():
    return [0.0, 1.0, 0.0]


def pure_entail():
    return [1.0, 0.0, 0.0]


# ---------------------------------------------------------------------------
# score_matrix
# ---------------------------------------------------------------------------

def make_summary(texts, topic_id="t", method=SummaryMethod.ABSTRACTIVE):
    return make_summary_record(topic_id, method, " ".join(t if t.endswith(".") else t + "." for t in texts))


def test_identical_sentence_has_row_maximum_cosine():
    summary = make_summary(["The bridge collapsed under floodwater"])
    pool = [
        Sentence("doc", 0, "Sirens sounded at dawn.", 0, 10),
        Sentence("doc", 1, "The bridge collapsed under floodwater.", 0, 10),
        Sentence("doc", 2, "Power was restored by evening.", 0, 10),
    ]
    matrix = score_matrix(summary, pool, builtin_lexical_scorer(), AttributionMethod.EMBEDDING)
    row = matrix.values[0]
    assert int(np.argmax(row)) == 1
    assert row[1] == pytest.approx(1.0, abs=1e-6)


class PinnedScorer:
    """Returns fixed values regardless of text; for plumbing tests."""

    scorer_id = "pinned"
    supports_concurrency = True

    def __init__(self, table):
        self.table = np.asarray(table, dtype=np.float64)

    def embed(self, texts):
        raise NotImplementedError

    def nli(self, pairs):
        flat = self.table.reshape(-1, 3)
        assert len(pairs) == flat.shape[0]
        return flat


def test_pinned_nli_matrix_passthrough():
    table = [
        [[0.1, 0.8, 0.1], [0.2, 0.7, 0.1], [0.9, 0.05, 0.05]],
        [[0.3, 0.3, 0.4], [0.5, 0.25, 0.25], [0.0, 1.0, 0.0]],
    ]
    summary = make_summary(["first statement", "second statement"])
    pool = [Sentence("doc", i, f"pool sentence {i}", 0, 5) for i in range(3)]
    matrix = score_matrix(summary, pool, PinnedScorer(table), AttributionMethod.NLI)
    assert np.allclose(matrix.values, np.asarray(table))


def test_batched_scoring_equals_pairwise_oracle(synthetic_topic):
    scorer = builtin_lexical_scorer()
    summary = make_summary(
        ["Flood sirens sounded at dawn", "Two shelters opened for residents"]
    )
    pool = topic_sentences(synthetic_topic)

    matrix = score_matrix(summary, pool, scorer, AttributionMethod.EMBEDDING)
    for r, ssent in enumerate(summary.sentences):
        for c, psent in enumerate(pool):
            solo = float(embed_text(ssent.text) @ embed_text(psent.text))
            assert abs(matrix.values[r, c] - solo) <= 1e-6

    nli = score_matrix(summary, pool, scorer, AttributionMethod.NLI)
    for r, ssent in enumerate(summary.sentences):
        for c, psent in enumerate(pool):
            # direction: document sentence is the premise
            solo = entail_probability(psent.text, ssent.text)
            assert abs(nli.values[r, c, 0] - solo) <= 1e-6


def test_empty_pool_rejected():
    summary = make_summary(["anything"])
    with pytest.raises(ValueError):
        score_matrix(summary, [], builtin_lexical_scorer(), AttributionMethod.EMBEDDING)


# ---------------------------------------------------------------------------
# rank_topk
# ---------------------------------------------------------------------------

def test_topk_argmax():
    assert rank_topk(np.asarray([0.1, 0.9, 0.5]), 1) == [(1, 0.9)]


def test_topk_ties_break_by_document_order():
    out = rank_topk(np.asarray([0.5, 0.5, 0.5]), 2)
    assert [j for j, _ in out] == [0, 1]


def test_topk_short_row_returns_all_flagged():
    matrix = nli_matrix([[pure_entail(), pure_neutral()]])
    sets = attribution_sets(matrix, 3)
    assert len(sets[0].candidates) == 2
    assert sets[0].short_pool


def test_topk_matches_sort_oracle():
    rng = random.Random(1234)
    for _ in range(500):
        row = np.asarray([rng.random() for _ in range(rng.randint(1, 30))])
        k = rng.randint(1, 5)
        got = rank_topk(row, k)
        oracle = sorted(range(len(row)), key=lambda j: (-row[j], j))[:k]
        assert [j for j, _ in got] == oracle


def test_topk_rejects_bad_k():
    with pytest.raises(ValueError):
        rank_topk(np.asarray([1.0]), 0)


# ---------------------------------------------------------------------------
# context_window / candidate_pool
# ---------------------------------------------------------------------------

def three_sentence_doc():
    from attribeval.corpus import segment

    doc = Document("ctx", Stream.NEWS, "First one. Second one. Third one.")
    return {"ctx": segment(doc)}


def test_context_window_middle_sentence():
    index = three_sentence_doc()
    w = context_window(SentenceRef("ctx", 1), index)
    assert w.prev.text == "First one." and w.next.text == "Third one."


def test_context_window_document_start_and_end():
    index = three_sentence_doc()
    first = context_window(SentenceRef("ctx", 0), index)
    assert first.prev is None and first.next.text == "Second one."
    last = context_window(SentenceRef("ctx", 2), index)
    assert last.prev.text == "Second one."
    assert last.next is None


def test_context_window_single_sentence_document():
    from attribeval.corpus import segment

    doc = Document("solo", Stream.TWITTER, "only sentence here")
    index = {"solo": segment(doc)}
    w = context_window(SentenceRef("solo", 0), index)
    assert w.prev is None and w.next is None


def test_context_window_dangling_ref():
    with pytest.raises(ValueError):
        context_window(SentenceRef("missing", 0), {})


def make_topic_n_docs(n_docs, sentences_each):
    docs = tuple(
        Document(
            f"doc{i}",
            Stream.NEWS,
            " ".join(f"Doc {i} point {j} stands." for j in range(sentences_each)),
        )
        for i in range(n_docs)
    )
    return Topic("pool-topic", Dataset.CUSTOM, docs, ("ref",))


def test_candidate_pool_hybrid_restricted_to_provenance():
    topic = make_topic_n_docs(3, 4)
    provenance = (("doc0", 1), ("doc1", 0), ("doc1", 3), ("doc2", 2), ("doc2", 3))
    hybrid = make_summary_record(
        "pool-topic", SummaryMethod.HYBRID, "a rewrite.", extraction_provenance=provenance
    )
    pool = candidate_pool(hybrid, topic)
    assert [(s.doc_id, s.index) for s in pool] == list(provenance)


def test_candidate_pool_abstractive_is_all_sentences():
    topic = make_topic_n_docs(3, 4)
    summary = make_summary_record("pool-topic", SummaryMethod.ABSTRACTIVE, "whatever.")
    assert len(candidate_pool(summary, topic)) == 12


def test_candidate_pool_extractive_passthrough():
    topic = make_topic_n_docs(2, 2)
    extract = make_summary_record(
        "pool-topic",
        SummaryMethod.EXTRACTIVE,
        "Doc 0 point 1 stands.",
        extraction_provenance=(("doc0", 1),),
    )
    pool = candidate_pool(extract, topic)
    assert [(s.doc_id, s.index) for s in pool] == [("doc0", 1)]


def test_candidate_pool_missing_provenance_errors():
    topic = make_topic_n_docs(1, 1)
    hybrid = make_summary_record("pool-topic", SummaryMethod.HYBRID, "text.")
    with pytest.raises(ValueError, match="provenance"):
        candidate_pool(hybrid, topic)
    dangling = make_summary_record(
        "pool-topic", SummaryMethod.HYBRID, "text.", extraction_provenance=(("docX", 0),)
    )
    with pytest.raises(ValueError, match="dangling"):
        candidate_pool(dangling, topic)


def test_attribution_candidates_always_in_pool_fuzz():
    rng = random.Random(8)
    scorer = builtin_lexical_scorer()
    words = ["storm", "water", "bridge", "siren", "coast", "night"]
    for _ in range(40):
        topic = make_topic_n_docs(rng.randint(1, 3), rng.randint(1, 4))
        summary = make_summary(
            [" ".join(rng.choices(words, k=5)) for _ in range(rng.randint(1, 3))],
            topic_id="pool-topic",
        )
        pool = candidate_pool(summary, topic)
        matrix = score_matrix(summary, pool, scorer, AttributionMethod.EMBEDDING)
        pool_refs = {SentenceRef.of(s) for s in pool}
        for aset in attribution_sets(matrix, 3):
            assert all(c.ref in pool_refs for c in aset.candidates)


# ---------------------------------------------------------------------------
# summac_score / neutrality
# ---------------------------------------------------------------------------

def test_summac_perfect_entailment():
    matrix = nli_matrix(
        [
            [pure_entail(), pure_neutral(), pure_neutral()],
            [pure_neutral(), pure_entail(), pure_neutral()],
        ]
    )
    assert summac_score(matrix) == pytest.approx(1.0, abs=1e-9)


def test_summac_mean_of_row_maxima():
    matrix = nli_matrix(
        [
            [[0.8, 0.2, 0.0], [0.1, 0.9, 0.0]],
            [[0.2, 0.8, 0.0], [0.6, 0.4, 0.0]],
        ]
    )
    assert summac_score(matrix) == pytest.approx(0.7, abs=1e-9)


def test_summac_column_permutation_invariant():
    rng = random.Random(2)
    base = np.random.default_rng(0).dirichlet((1, 1, 1), size=(3, 5))
    matrix = nli_matrix(base.tolist())
    score = summac_score(matrix)
    for _ in range(5):
        perm = list(range(5))
        rng.shuffle(perm)
        permuted = nli_matrix(base[:, perm, :].tolist())
        assert summac_score(permuted) == pytest.approx(score, abs=1e-12)


def test_summac_monotone_in_single_entail_cell():
    rng = np.random.default_rng(42)
    for _ in range(200):
        probs = rng.dirichlet((1, 1, 1), size=(3, 4))
        matrix = nli_matrix(probs.tolist())
        before = summac_score(matrix)
        r, c = rng.integers(0, 3), rng.integers(0, 4)
        bumped = probs.copy()
        room = 1.0 - bumped[r, c, 0]
        bump = rng.uniform(0, room)
        bumped[r, c, 0] += bump
        bumped[r, c, 1] = max(0.0, bumped[r, c, 1] - bump)
        assert summac_score(nli_matrix(bumped.tolist())) >= before - 1e-12


def test_removing_dominated_column_preserves_score():
    matrix = nli_matrix(
        [
            [[0.9, 0.1, 0.0], [0.4, 0.6, 0.0]],
            [[0.7, 0.3, 0.0], [0.2, 0.8, 0.0]],
        ]
    )
    reduced = nli_matrix([[[0.9, 0.1, 0.0]], [[0.7, 0.3, 0.0]]])
    assert summac_score(matrix) == pytest.approx(summac_score(reduced), abs=1e-12)


def test_neutrality_values():
    col = np.asarray([[0.0, 1.0, 0.0], [0.0, 1.0, 0.0]])
    assert neutrality(col) == pytest.approx(1.0)
    col = np.asarray([[0.5, 0.2, 0.3], [0.3, 0.4, 0.3]])
    assert neutrality(col) == pytest.approx(0.3, abs=1e-12)


def test_neutrality_argsort_matches_oracle():
    rng = np.random.default_rng(3)
    probs = rng.dirichlet((1, 1, 1), size=(4, 7))
    matrix = nli_matrix(probs.tolist())
    neutralities = [neutrality(matrix.values[:, j, :]) for j in range(7)]
    oracle = sorted(range(7), key=lambda j: float(np.mean(probs[:, j, 1])))
    assert sorted(range(7), key=lambda j: neutralities[j]) == oracle


# ---------------------------------------------------------------------------
# Reduction experiment
# ---------------------------------------------------------------------------

def single_support_matrix(pool_size=6, rows=3, support_col=2):
    cells = [
        [pure_entail() if c == support_col else pure_neutral() for c in range(pool_size)]
        for _ in range(rows)
    ]
    return nli_matrix(cells)


def test_reduction_single_support_construction():
    pool_size = 6
    matrix = single_support_matrix(pool_size=pool_size)
    trajectory = reduce_matrix(matrix, epsilon=1e-4)
    assert len(trajectory.steps) == pool_size
    assert trajectory.initial_score == pytest.approx(1.0)
    # Score holds at the initial value until the supporting sentence goes.
    for step in trajectory.steps[:-1]:
        assert step.summac_after == pytest.approx(1.0, abs=1e-9)
        assert step.removed != SentenceRef("p", 2)
    assert trajectory.steps[-1].removed == SentenceRef("p", 2)
    assert trajectory.steps[-1].summac_after == pytest.approx(0.0)
    assert trajectory.influential_count == pool_size


def test_reduction_trajectory_matches_independent_replay():
    rng = np.random.default_rng(11)
    probs = rng.dirichlet((1, 1, 1), size=(3, 5))
    matrix = nli_matrix(probs.tolist())
    trajectory = reduce_matrix(matrix, epsilon=1e-4)
    assert len(trajectory.steps) == 5

    # Second, independent loop over plain python lists.
    remaining = list(range(5))
    replay = []
    while remaining:
        neutral = [(float(np.mean(probs[:, j, 1])), j) for j in remaining]
        best = max(neutral, key=lambda nj: (nj[0], -nj[1]))[1]
        remaining.remove(best)
        if remaining:
            after = float(np.mean(np.max(probs[:, remaining, 0], axis=1)))
        else:
            after = 0.0
        replay.append((best, after))
    for step, (col, after) in zip(trajectory.steps, replay):
        assert step.removed.index == col
        assert step.summac_after == pytest.approx(after, abs=1e-12)
    assert trajectory.steps[-1].summac_after == 0.0


def test_reduction_frozen_order_uses_initial_neutralities():
    # Column 0 starts most neutral; adaptive and frozen agree here, the
    # flag is about recomputation, exercised via both paths running.
    matrix = single_support_matrix(pool_size=3, support_col=1)
    adaptive = reduce_matrix(matrix, order="adaptive")
    frozen = reduce_matrix(matrix, order="frozen")
    assert [s.removed for s in adaptive.steps] == [s.removed for s in frozen.steps]
    with pytest.raises(ValueError):
        reduce_matrix(matrix, order="sideways")


def test_reduction_on_extract_over_own_sources(synthetic_topic):
    """Extractive summaries concentrate support: the score must move within
    the first summary-sentence-count + 1 removals on the bundled topic."""
    sents = topic_sentences(synthetic_topic)
    extract = extract_summary(sents, 300, topic_id=synthetic_topic.topic_id)
    scorer = builtin_lexical_scorer()
    pool = candidate_pool(extract, synthetic_topic)
    trajectory = reduction_experiment(extract, pool, scorer, epsilon=1e-4)
    assert len(trajectory.steps) == len(pool)
    assert trajectory.influential_count <= len(extract.sentences) + 1


def test_reduction_scorer_failure_returns_marked_trajectory():
    class Failing:
        scorer_id = "failing"
        supports_concurrency = True

        def embed(self, texts):
            from attribeval.attribution import ScorerError

            raise ScorerError("down", retryable=True)

        def nli(self, pairs):
            from attribeval.attribution import ScorerError

            raise ScorerError("down", retryable=True)

    summary = make_summary(["statement one"])
    pool = [Sentence("d", 0, "pool", 0, 4)]
    trajectory = reduction_experiment(summary, pool, Failing())
    assert trajectory.failure is not None
    assert trajectory.steps == ()


# ---------------------------------------------------------------------------
# Built-in lexical scorer
# ---------------------------------------------------------------------------

def test_lexical_identical_texts():
    scorer = LexicalScorer()
    vecs = scorer.embed(["The surge peaked at dawn.", "The surge peaked at dawn."])
    assert float(vecs[0] @ vecs[1]) == pytest.approx(1.0, abs=1e-6)
    probs = scorer.nli([("The surge peaked at dawn.", "The surge peaked at dawn.")])
    assert probs[0, 0] == pytest.approx(1.0)


def test_lexical_disjoint_alphabets():
    scorer = LexicalScorer()
    vecs = scorer.embed(["aaa", "zzz"])
    assert float(vecs[0] @ vecs[1]) == 0.0
    probs = scorer.nli([("aaa bbb", "zzz yyy")])
    assert probs[0, 1] == pytest.approx(1.0)


def test_lexical_embedding_symmetry():
    scorer = LexicalScorer()
    pairs = [
        ("Sirens sounded at dawn.", "The town heard sirens early."),
        ("bridge out", "the bridge collapsed"),
    ]
    for a, b in pairs:
        va, vb = scorer.embed([a, b])
        assert float(va @ vb) == pytest.approx(float(vb @ va), abs=1e-6)


def test_lexical_unit_norm_or_zero():
    scorer = LexicalScorer()
    for text in ["", "a", "ab", "hello world", "x" * 500]:
        vec = scorer.embed([text])[0]
        norm = float(np.linalg.norm(vec))
        assert norm == pytest.approx(1.0, abs=1e-6) or norm == 0.0


def test_lexical_probability_simplex():
    scorer = LexicalScorer()
    probs = scorer.nli([("a b c d", "c d e f"), ("", "x"), ("same", "same")])
    assert np.all(probs >= 0) and np.all(probs <= 1)
    assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)


def test_lexical_matches_pinned_golden(fixtures_dir):
    golden = json.loads(
        (fixtures_dir / "lexical" / "golden_pairs.json").read_text(encoding="utf-8")
    )
    scorer = LexicalScorer()
    for entry in golden:
        va, vb = scorer.embed([entry["text_a"], entry["text_b"]])
        assert float(va @ vb) == pytest.approx(entry["cosine"], abs=1e-9)
        probs = scorer.nli([(entry["text_a"], entry["text_b"])])[0]
        assert probs[0] == pytest.approx(entry["entail"], abs=1e-9)
        assert probs[1] == pytest.approx(entry["neutral"], abs=1e-9)
        assert probs[2] == pytest.approx(entry["contradict"], abs=1e-9)


# ---------------------------------------------------------------------------
# Matrix persistence
# ---------------------------------------------------------------------------

def test_matrix_round_trip(tmp_path):
    rng = np.random.default_rng(77)
    emb = ScoreMatrix(
        method=AttributionMethod.EMBEDDING,
        summary_refs=refs(2, "s"),
        doc_refs=refs(4, "d"),
        values=rng.uniform(-1, 1, size=(2, 4)),
    )
    nli = nli_matrix(rng.dirichlet((1, 1, 1), size=(3, 2)).tolist())
    for matrix, name in ((emb, "emb"), (nli, "nli")):
        path = tmp_path / f"{name}.matrix"
        save_matrix(matrix, path)
        loaded = load_matrix(path)
        assert loaded.method == matrix.method
        assert loaded.summary_refs == matrix.summary_refs
        assert loaded.doc_refs == matrix.doc_refs
        assert np.array_equal(loaded.values, matrix.values)


def test_matrix_load_rejects_junk(tmp_path):
    path = tmp_path / "x.matrix"
    path.write_text("not a matrix\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_matrix(path)
