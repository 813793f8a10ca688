import math
import random

import numpy as np
import pytest

from aces import (
    NO_OVERLAP,
    AcesConfig,
    Backends,
    CategoryScore,
    DescriptorLabel,
    HashEmbedderBackend,
    PresetEmbedderBackend,
    ScoreReport,
    StubFluencyBackend,
    StubTaggerBackend,
    aces_pair,
    category_pr_re,
    corpus_score,
    f_beta,
    f_single,
    merge_reference_groups,
    overlap_penalty,
)
from aces.errors import (
    EmptyCorpusError,
    EmptyGroupError,
    EmptyReferencesError,
    EmptyTextError,
    OverlapOutOfRangeError,
)

import oracle
from scenarios import build_backends, build_config, make_scenario

L = DescriptorLabel


def angle_vectors(angles):
    return {name: np.array([math.cos(a), math.sin(a)]) for name, a in angles.items()}


def make_report(final, **overrides):
    fields = dict(
        per_category={},
        overlap_count=0,
        f_single=final,
        penalty=0.0,
        aces_1=final,
        fluency_probability=0.0,
        fluency_flagged=False,
        fallback_used=False,
        final=final,
    )
    fields.update(overrides)
    return ScoreReport(**fields)


# ---------------------------------------------------------------- merging


def test_merge_combines_per_label():
    one = {L.WHO: ["bird"], L.HOW: ["caws"]}
    two = {L.WHO: ["bird"], L.HOW: ["croaks"]}
    merged = merge_reference_groups([one, two])
    assert merged[L.WHO] == ["bird", "bird"]
    assert merged[L.HOW] == ["caws", "croaks"]


def test_merge_empty_list():
    assert merge_reference_groups([]) == {}


def test_merge_disjoint_labels_random():
    # Each label lives in exactly one reference, so its list must come
    # through unchanged no matter how the references are ordered.
    rng = random.Random(4)
    for _ in range(50):
        refs = []
        expected = {}
        for label in (L.WHO, L.HOW, L.WHAT, L.WHERE):
            tokens = [f"t{rng.randint(0, 9)}" for _ in range(rng.randint(0, 3))]
            if tokens:
                refs.append({label: list(tokens)})
                expected[label] = list(tokens)
        rng.shuffle(refs)
        assert merge_reference_groups(refs) == expected


# ---------------------------------------------------------------- pr/re


def test_singleton_groups():
    vectors = angle_vectors({"c": 0.0, "r": math.pi / 4})
    backend = PresetEmbedderBackend(vectors)
    precision, recall = category_pr_re(["c"], ["r"], backend)
    expected = math.cos(math.pi / 4)
    assert precision == pytest.approx(expected, abs=1e-12)
    assert recall == pytest.approx(expected, abs=1e-12)


def test_identical_token_lists():
    backend = HashEmbedderBackend(dimension=16)
    tokens = ["rain", "thunder", "wind"]
    precision, recall = category_pr_re(tokens, tokens, backend)
    assert precision == pytest.approx(1.0, abs=1e-6)
    assert recall == pytest.approx(1.0, abs=1e-6)


def test_known_similarity_matrix():
    angles = {"c0": 0.0, "c1": math.pi / 3, "r0": math.pi / 6, "r1": math.pi / 2, "r2": math.pi}
    backend = PresetEmbedderBackend(angle_vectors(angles))
    cand, ref = ["c0", "c1"], ["r0", "r1", "r2"]
    sims = [[math.cos(angles[c] - angles[r]) for r in ref] for c in cand]
    expected_precision = sum(max(sims[i][j] for i in range(2)) for j in range(3)) / 3
    expected_recall = sum(max(sims[i][j] for j in range(3)) for i in range(2)) / 2
    precision, recall = category_pr_re(cand, ref, backend)
    assert precision == pytest.approx(expected_precision, abs=1e-9)
    assert recall == pytest.approx(expected_recall, abs=1e-9)


def test_empty_group_rejected():
    backend = HashEmbedderBackend()
    with pytest.raises(EmptyGroupError):
        category_pr_re([], ["a"], backend)
    with pytest.raises(EmptyGroupError):
        category_pr_re(["a"], [], backend)


# ---------------------------------------------------------------- f_beta


def test_f_beta_equal_inputs():
    assert f_beta(0.8, 0.8, 9.0) == pytest.approx(0.8, abs=1e-12)


def test_f_beta_hand_evaluation():
    assert f_beta(1.0, 0.5, 9.0) == pytest.approx(10 * 0.5 / 9.5, abs=1e-12)
    assert f_beta(1.0, 0.5, 9.0) == pytest.approx(0.5263157894736842, abs=1e-9)


def test_f_beta_zero_precision():
    assert f_beta(0.0, 0.7, 9.0) == 0.0
    assert f_beta(0.0, 0.0, 9.0) == 0.0


# ---------------------------------------------------------------- f_single


def test_f_single_single_label():
    backend = PresetEmbedderBackend(angle_vectors({"x": 0.0, "y": math.acos(0.8)}))
    value = f_single({L.WHO: ["x"]}, {L.WHO: ["y"]}, backend, AcesConfig())
    assert value == pytest.approx(0.8, abs=1e-9)


def test_f_single_two_labels_mean():
    backend = PresetEmbedderBackend(
        angle_vectors(
            {"a": 0.0, "b": math.acos(0.4), "c": 1.0, "d": 1.0 + math.acos(0.8)}
        )
    )
    groups = {L.WHO: ["a"], L.HOW: ["c"]}
    refs = {L.WHO: ["b"], L.HOW: ["d"]}
    assert f_single(groups, refs, backend, AcesConfig()) == pytest.approx(0.6, abs=1e-9)


def test_f_single_no_overlap_sentinel():
    backend = HashEmbedderBackend()
    result = f_single({L.WHAT: ["door"]}, {L.WHO: ["man"]}, backend, AcesConfig())
    assert result is NO_OVERLAP


# ---------------------------------------------------------------- penalty


def test_penalty_values():
    config = AcesConfig()
    assert overlap_penalty(13, config) == 0.0
    assert overlap_penalty(0, config) == pytest.approx(1 / 1850, abs=1e-12)
    assert overlap_penalty(12, config) == pytest.approx((1 / 13) / 1850, abs=1e-15)


def test_penalty_disabled():
    config = AcesConfig(apply_penalty=False)
    assert overlap_penalty(0, config) == 0.0


def test_penalty_range_check():
    config = AcesConfig()
    with pytest.raises(OverlapOutOfRangeError):
        overlap_penalty(-1, config)
    with pytest.raises(OverlapOutOfRangeError):
        overlap_penalty(14, config)


def test_penalty_monotone_in_overlap():
    config = AcesConfig()
    penalties = [overlap_penalty(k, config) for k in range(14)]
    assert penalties == sorted(penalties, reverse=True)


# ---------------------------------------------------------------- aces_pair


def fixed_backends(fluency_probability=0.0):
    return Backends(
        tagger=StubTaggerBackend({"rain": "WHAT", "thunder": "WHAT", "man": "WHO"}),
        embedder=HashEmbedderBackend(dimension=16),
        fluency=StubFluencyBackend({}, default=fluency_probability),
    )


def test_zero_flag_leaves_score_unchanged():
    report = aces_pair("rain and thunder", ["thunder then rain"], fixed_backends(0.0))
    assert not report.fluency_flagged
    assert report.final == report.aces_1


def test_flag_with_weight_half_halves_exactly():
    clean = aces_pair("rain and thunder", ["thunder then rain"], fixed_backends(0.0))
    flagged = aces_pair("rain and thunder", ["thunder then rain"], fixed_backends(0.95))
    assert flagged.fluency_flagged
    assert flagged.aces_1 == clean.aces_1
    assert flagged.final == 0.5 * clean.aces_1


def test_report_identities():
    report = aces_pair("a man and rain", ["rain near a man"], fixed_backends())
    assert report.overlap_count == len(report.per_category)
    assert report.aces_1 == report.f_single - report.penalty
    assert report.final <= report.aces_1 + 1e-15


def test_empty_references_rejected():
    with pytest.raises(EmptyReferencesError):
        aces_pair("rain", [], fixed_backends())


def test_empty_candidate_rejected():
    with pytest.raises(EmptyTextError):
        aces_pair("  ", ["rain"], fixed_backends())


def test_matches_oracle_on_random_scenarios():
    rng = random.Random(99)
    for _ in range(200):
        scenario = make_scenario(rng)
        report = aces_pair(
            scenario["candidate"],
            scenario["references"],
            build_backends(scenario),
            build_config(scenario),
        )
        expected = oracle.aces_pair(
            scenario["candidate"],
            scenario["references"],
            scenario["tagger_table"],
            scenario["fluency_table"],
            scenario["fluency_default"],
            fluency_weight=scenario["config"]["fluency_weight"],
            fluency_threshold=scenario["config"]["fluency_threshold"],
            beta=scenario["config"]["f_beta"],
            apply_penalty=scenario["config"]["apply_penalty"],
            penalty_score=scenario["config"]["penalty_score"],
            technique=scenario["config"]["distance_technique"],
            sbert_fallback=scenario["config"]["sbert_fallback"],
            dimension=scenario["dimension"],
            seed=scenario["seed"],
        )
        # rel covers the rare blow-ups where Re + beta*Pr approaches zero
        # under negative cosine similarities; for scores in the metric's
        # meaningful range the bound stays the absolute 1e-9.
        assert report.final == pytest.approx(expected["final"], abs=1e-9, rel=1e-9)
        assert report.aces_1 == pytest.approx(expected["aces_1"], abs=1e-9, rel=1e-9)
        assert report.overlap_count == expected["overlap_count"]
        assert report.fallback_used == expected["fallback_used"]
        assert report.fluency_flagged == expected["fluency_flagged"]


def test_no_overlap_fallback_off_scores_zero_even_when_flagged():
    backends = Backends(
        tagger=StubTaggerBackend({"door": "WHAT", "man": "WHO"}),
        embedder=HashEmbedderBackend(),
        fluency=StubFluencyBackend({}, default=0.99),
    )
    report = aces_pair(
        "a door is followed by a",
        ["a man speaking"],
        backends,
        AcesConfig(sbert_fallback=False),
    )
    assert report.aces_1 == 0.0
    assert report.final == 0.0
    assert report.penalty == 0.0
    assert not report.fallback_used
    assert report.fluency_flagged


def test_no_overlap_fallback_on_uses_caption_similarity():
    backends = Backends(
        tagger=StubTaggerBackend({"door": "WHAT", "man": "WHO"}),
        embedder=HashEmbedderBackend(dimension=16),
        fluency=StubFluencyBackend({}, default=0.0),
    )
    candidate = "a door is followed by a"
    references = ["a man speaking", "someone talks"]
    report = aces_pair(candidate, references, backends, AcesConfig())
    sims = [
        oracle.sim(oracle.hash_embed(candidate), oracle.hash_embed(r), "cosine")
        for r in references
    ]
    expected = sum(sims) / len(sims) - 1 / 1850
    assert report.fallback_used
    assert report.final == pytest.approx(expected, abs=1e-9)


def test_reference_permutation_invariance():
    rng = random.Random(17)
    for _ in range(50):
        scenario = make_scenario(rng)
        if len(scenario["references"]) < 2:
            continue
        backends = build_backends(scenario)
        config = build_config(scenario)
        baseline = aces_pair(scenario["candidate"], scenario["references"], backends, config)
        shuffled = list(scenario["references"])
        rng.shuffle(shuffled)
        permuted = aces_pair(scenario["candidate"], shuffled, backends, config)
        assert permuted.final == pytest.approx(baseline.final, abs=1e-9, rel=1e-9)


def test_zero_aces1_stays_zero_under_any_flag():
    for default in (0.0, 0.99):
        backends = Backends(
            tagger=StubTaggerBackend({"door": "WHAT"}),
            embedder=HashEmbedderBackend(),
            fluency=StubFluencyBackend({}, default=default),
        )
        report = aces_pair("door", ["nothing here"], backends, AcesConfig(sbert_fallback=False))
        assert report.aces_1 == 0.0
        assert report.final == 0.0


def test_score_range_in_nonnegative_similarity_regime():
    # All-positive embedding components keep every cosine >= 0.
    class NonNegativeHashBackend(HashEmbedderBackend):
        def embed(self, text):
            vector = np.abs(super().embed(text))
            return vector / np.linalg.norm(vector)

    words = [f"w{i}" for i in range(12)]
    table = {w: label for w, label in zip(words, ["WHO", "HOW", "WHAT", "WHERE"] * 3)}
    backends = Backends(
        tagger=StubTaggerBackend(table),
        embedder=NonNegativeHashBackend(dimension=8),
        fluency=StubFluencyBackend({}, default=0.0),
    )
    rng2 = random.Random(8)
    for _ in range(100):
        candidate = " ".join(rng2.choice(words) for _ in range(rng2.randint(1, 5)))
        references = [
            " ".join(rng2.choice(words) for _ in range(rng2.randint(1, 5)))
            for _ in range(rng2.randint(1, 3))
        ]
        with_penalty = aces_pair(candidate, references, backends, AcesConfig(sbert_fallback=False))
        assert -1 / 1850 - 1e-12 <= with_penalty.final <= 1.0 + 1e-9
        without = aces_pair(
            candidate,
            references,
            backends,
            AcesConfig(apply_penalty=False, sbert_fallback=False),
        )
        assert -1e-12 <= without.final <= 1.0 + 1e-9


def test_recall_sensitivity_is_nine_times_precision_sensitivity():
    step = 1e-6
    for x in (0.2, 0.5, 0.8):
        df_dre = (f_beta(x, x + step, 9.0) - f_beta(x, x - step, 9.0)) / (2 * step)
        df_dpr = (f_beta(x + step, x, 9.0) - f_beta(x - step, x, 9.0)) / (2 * step)
        assert df_dre / df_dpr == pytest.approx(9.0, abs=0.1)


# ---------------------------------------------------------------- corpus


def test_corpus_single_pair():
    report = make_report(0.42)
    assert corpus_score([report]) == 0.42


def test_corpus_mean():
    reports = [make_report(v) for v in (0.2, 0.4, 0.6)]
    assert corpus_score(reports) == pytest.approx(0.4, abs=1e-12)


def test_corpus_matches_brute_force():
    rng = random.Random(31)
    finals = [rng.random() for _ in range(100)]
    reports = [make_report(v) for v in finals]
    assert corpus_score(reports) == pytest.approx(sum(finals) / len(finals), abs=1e-12)


def test_corpus_empty_rejected():
    with pytest.raises(EmptyCorpusError):
        corpus_score([])
