from hypothesis import given
from hypothesis import strategies as st

from domain.models.verdict import CampaignSummary, Conclusion, Hypotheses, Verdict

reasons = st.sampled_from(["hypothesis:depth", "regular_sequence_not_found", ""])


@st.composite
def summaries(draw):
    summary = CampaignSummary(statement_id="minsyz", seed=7)
    summary.holds = draw(st.integers(0, 20))
    summary.fails = draw(st.integers(0, 3))
    for reason in draw(st.lists(reasons, max_size=5)):
        summary.record(Verdict("minsyz", Hypotheses(), Conclusion.INCONCLUSIVE, reason=reason))
    summary.sampled = draw(st.booleans())
    summary.budget_exhausted = draw(st.booleans())
    return summary


class TestHypotheses:
    def test_first_failure_includes_undecided(self):
        hyps = Hypotheses()
        hyps.add("finite_length", True)
        hyps.add("cohen_macaulay_ring", None, "無法判定")
        hyps.add("depth", False)
        assert not hyps.all_true
        assert hyps.first_failure().name == "cohen_macaulay_ring"
        assert hyps.get("depth").value is False
        assert hyps.to_list()[1] == {"name": "cohen_macaulay_ring", "value": None, "detail": "無法判定"}


class TestVerdict:
    def test_to_dict_without_timing(self):
        verdict = Verdict("minsyz", Hypotheses(), Conclusion.HOLDS, {"mu": 2}, seed=3, timings={"total": 0.1})
        data = verdict.to_dict(include_timing=False)
        assert data["conclusion"] == "holds"
        assert "timings" not in data
        assert verdict.to_dict()["timings"] == {"total": 0.1}


class TestCampaignSummary:
    def test_record_counts_discard_reasons(self):
        verdicts = [
            Verdict("fitting", Hypotheses(), Conclusion.HOLDS),
            Verdict("fitting", Hypotheses(), Conclusion.INCONCLUSIVE, reason="hypothesis:finite_length"),
            Verdict("fitting", Hypotheses(), Conclusion.INCONCLUSIVE),
        ]
        summary = CampaignSummary.from_verdicts("fitting", 1, verdicts)
        assert summary.total == 3
        assert summary.to_dict()["discarded_reasons"] == {"hypothesis:finite_length": 1, "unspecified": 1}

    @given(summaries(), summaries())
    def test_merge_is_commutative(self, a, b):
        assert a.merge(b).to_dict() == b.merge(a).to_dict()

    @given(summaries(), summaries(), summaries())
    def test_merge_is_associative(self, a, b, c):
        assert a.merge(b).merge(c).to_dict() == a.merge(b.merge(c)).to_dict()

    @given(summaries())
    def test_empty_summary_is_identity(self, a):
        assert a.merge(CampaignSummary("minsyz", 7)).to_dict() == a.to_dict()
