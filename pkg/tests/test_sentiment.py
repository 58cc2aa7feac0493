import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, rec, write
from sentirank.corpus import CitationRecord
from sentirank.errors import InputError
from sentirank.sentiment import (
    ADJECTIVE,
    ADVERB,
    NOUN,
    CurationPolicy,
    Lexicon,
    LexiconEntry,
    Token,
    TokenizedSentence,
    build_curation,
    collapse_sentiwordnet,
    curate_frequent_lemmas,
    load_lexicon,
    normalize_pos,
    preprocess,
    score_pair,
    score_record,
    score_sentence,
    tokenize,
)


class TestLexicon:
    def test_good_accepted_weird_rejected(self, lexicon):
        assert lexicon.lookup("good", ADJECTIVE) == LexiconEntry("good", ADJECTIVE, 0.75, 0.0, 0.25)
        assert lexicon.lookup("weird", ADJECTIVE) is None
        assert len(lexicon.rejected) == 1 and "weird" in lexicon.rejected[0]

    def test_no_forms_means_identity(self):
        lex = load_lexicon(FIXTURES / "lexicon_entries.tsv")
        assert lex.identity_fallback_only
        assert lex.lemmatize("problems", NOUN) == "problems"

    def test_empty_forms_file(self, tmp_path):
        lex = load_lexicon(FIXTURES / "lexicon_entries.tsv", write(tmp_path / "f.tsv", ""))
        assert lex.identity_fallback_only

    def test_forms(self, lexicon):
        assert lexicon.lemmatize("problems", NOUN) == "problem"
        assert lexicon.lemmatize("better", ADJECTIVE) == "good"

    def test_out_of_range_rejected(self, tmp_path):
        p = write(tmp_path / "e.tsv", "good\ta\t0.75\t0\t0.25\nodd\ta\t1.5\t-0.5\t0\n")
        lex = load_lexicon(p)
        assert ("good", ADJECTIVE) in lex.entries and len(lex.rejected) == 1

    def test_drift_renormalized(self, tmp_path):
        lex = load_lexicon(write(tmp_path / "e.tsv", "x\tn\t0.3333333\t0.3333333\t0.3333335\n"))
        e = lex.lookup("x", NOUN)
        assert abs(e.pos_score + e.neg_score + e.neu_score - 1.0) <= 1e-9

    def test_all_rejected_is_error(self, tmp_path):
        with pytest.raises(InputError, match="no valid"):
            load_lexicon(write(tmp_path / "e.tsv", "weird\ta\t0.5\t0.5\t0.5\n"))

    def test_entry_invariant(self):
        with pytest.raises(InputError):
            LexiconEntry("x", NOUN, 0.5, 0.5, 0.5)

    @pytest.mark.parametrize("tag,pos", [("NNS", NOUN), ("JJR", ADJECTIVE), ("RB", ADVERB),
                                         ("s", ADJECTIVE), ("VBZ", "other"), ("adverb", ADVERB)])
    def test_normalize_pos(self, tag, pos):
        assert normalize_pos(tag) == pos

    def test_collapse_sentiwordnet(self):
        entries = {(e.lemma, e.pos): e for e in collapse_sentiwordnet(FIXTURES / "sentiwordnet_sample.txt")}
        good = entries[("good", ADJECTIVE)]
        assert math.isclose(good.pos_score, 0.5) and math.isclose(good.neg_score, 0.0625)
        assert ("well", ADVERB) in entries and ("well", ADJECTIVE) in entries
        assert not any(lemma == "like" for lemma, _ in entries)
        for e in entries.values():
            assert abs(e.pos_score + e.neg_score + e.neu_score - 1) <= 1e-9


class TestPreprocess:
    def test_kim_hovy_sentence(self, lexicon):
        tok = preprocess("Kim and Hovy (2006) make a similar assumption.", lexicon)
        assert Token("similar", ADJECTIVE, "similar") in tok.tokens
        assert Token("assumption", NOUN, "assumption") in tok.tokens
        assert "2006" not in tok.lemmas

    @pytest.mark.parametrize("text", ["", "123 456", "a b c", "[1, 2]"])
    def test_empty(self, lexicon, text):
        assert preprocess(text, lexicon) == TokenizedSentence()

    def test_tokenize_strips_markers(self):
        assert tokenize("as shown [3] and by Smith et al. (2004b), well-known") == [
            "as", "shown", "and", "by", "smith", "et", "al", "well", "known"]

    def test_lemmatized_and_filtered(self, lexicon):
        tok = preprocess("These models have problems but better results", lexicon)
        assert tok.lemmas == ("model", "problem", "good")

    def test_curation_removes(self, lexicon):
        tok = preprocess("good model", lexicon, CurationPolicy(frozenset({"model"})))
        assert tok.lemmas == ("good",)

    def test_pretagged(self, lexicon):
        tok = preprocess("", lexicon, tagged_text="The/DT good/NN models/NNS work/VBP well/RB")
        assert [(t.lemma, t.pos) for t in tok.tokens] == [("good", NOUN), ("model", NOUN), ("well", ADVERB)]

    def test_custom_tagger(self, lexicon):
        tok = preprocess("good poor", lexicon, tagger=lambda words, lex: [NOUN] * len(words))
        assert score_sentence(tok, lexicon) == 0.0


class TestCuration:
    def test_ninety_of_hundred(self):
        sents = [["model", "x"]] * 90 + [["y"]] * 10
        assert "model" in curate_frequent_lemmas(sents, 0.5)

    def test_threshold_one(self):
        sents = [["a", "b"], ["a"], ["a", "c"]]
        assert curate_frequent_lemmas(sents, 1.0) == {"a"}

    def test_model_three_sentences(self):
        sents = [["model", "good"], ["model", "poor"], ["model", "good", "problem"]]
        assert curate_frequent_lemmas(sents, 0.6) == {"model", "good"}

    def test_counts_documents_not_tokens(self):
        assert curate_frequent_lemmas([["a", "a", "a"], ["b"], ["c"]], 0.5) == set()

    @pytest.mark.parametrize("t", [0.0, -0.1, 1.5])
    def test_bad_threshold(self, t):
        with pytest.raises(InputError):
            curate_frequent_lemmas([["a"]], t)

    def test_build_curation_skips_precomputed(self, lexicon):
        records = [rec("A", "B", text="good model"), rec("C", "B", text="poor model"), rec("D", "B", 1.0)]
        assert build_curation(records, lexicon, 1.0).removed == {"model"}
        assert build_curation(records, lexicon, None).removed == frozenset()


class TestScoring:
    def test_hand_sum(self, lexicon):
        tok = TokenizedSentence((Token("good", ADJECTIVE, "good"), Token("problem", NOUN, "problem")))
        assert score_sentence(tok, lexicon) == 0.5

    def test_empty_and_unknown(self, lexicon):
        assert score_sentence(TokenizedSentence(), lexicon) == 0
        assert score_sentence(TokenizedSentence((Token("zzz", NOUN, "zzz"),)), lexicon) == 0

    def test_text_record(self, lexicon):
        assert score_record(rec("A", "B", text="A good model with problems."), lexicon) == 0.5

    def test_precomputed_wins(self, lexicon):
        assert score_record(CitationRecord("A", "B", "good", -0.125), lexicon) == -0.125

    def test_text_needs_lexicon(self):
        with pytest.raises(InputError):
            score_record(rec("A", "B", text="good"), None)

    def test_kim_hovy_pairs(self):
        pair = [rec("C08-1060", "D07-1113", s) for s in (-0.875, -1.875, 0.0)]
        assert score_pair(pair, None) == -2.75
        assert score_pair([rec("C08-1101", "D07-1113", 0.25)], None) == 0.25
        assert score_pair([], None) == 0

    def test_mixed_pairs_rejected(self):
        with pytest.raises(InputError):
            score_pair([rec("A", "B", 1.0), rec("A", "C", 1.0)], None)


# property tests over random lexica and sentences drawn from their vocabulary

WORDS = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]
POS = [NOUN, ADJECTIVE, ADVERB]


@st.composite
def lexica(draw):
    entries = {}
    for w in WORDS:
        pos = draw(st.sampled_from(POS))
        p = draw(st.sampled_from([i / 8 for i in range(9)]))
        n = draw(st.sampled_from([i / 8 for i in range(9 - int(p * 8))]))
        entries[(w, pos)] = LexiconEntry(w, pos, p, n, 1.0 - p - n)
    return Lexicon(entries)


sentences = st.lists(st.sampled_from(WORDS + ["the", "of", "42"]), max_size=12).map(" ".join)


@given(lexica(), sentences)
def test_sign_symmetry(lex, text):
    assert score_sentence(preprocess(text, lex.swapped()), lex.swapped()) == -score_sentence(preprocess(text, lex), lex)


@given(lexica(), sentences, st.sampled_from(WORDS))
def test_monotone_in_positivity(lex, text, word):
    (key,) = [k for k in lex.entries if k[0] == word]
    e = lex.entries[key]
    bump = min(e.neu_score, 0.125)
    raised = dict(lex.entries)
    raised[key] = LexiconEntry(e.lemma, e.pos, e.pos_score + bump, e.neg_score, e.neu_score - bump)
    lex2 = Lexicon(raised)
    assert score_sentence(preprocess(text, lex2), lex2) >= score_sentence(preprocess(text, lex), lex)


@given(lexica(), sentences)
def test_bounded_and_deterministic(lex, text):
    tok = preprocess(text, lex)
    s = score_sentence(tok, lex)
    assert abs(s) <= tok.retained_count
    assert s == score_sentence(preprocess(text, lex), lex)


@given(sentences)
def test_all_neutral_scores_zero(text):
    lex = Lexicon({(w, NOUN): LexiconEntry(w, NOUN, 0.0, 0.0, 1.0) for w in WORDS})
    assert score_sentence(preprocess(text, lex), lex) == 0.0
