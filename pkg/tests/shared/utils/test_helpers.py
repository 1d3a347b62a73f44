from datetime import datetime

from shared.utils.helpers import Stopwatch, derive_seed, get_report_time, lcm_all, truncate_text


class TestDeriveSeed:
    def test_stable(self):
        assert derive_seed(42, "minsyz", "artin_m2", 3) == derive_seed(42, "minsyz", "artin_m2", 3)

    def test_labels_separate_streams(self):
        seeds = {derive_seed(42, "minsyz", "artin_m2", i) for i in range(50)}
        assert len(seeds) == 50
        assert derive_seed(1, "a") != derive_seed(2, "a")

    def test_fits_in_63_bits(self):
        assert 0 <= derive_seed(0) < 2 ** 63


class TestHelpers:
    def test_lcm_all(self):
        assert lcm_all([2, 3]) == 6
        assert lcm_all([]) == 1

    def test_truncate_text(self):
        assert truncate_text("abcdef", 5) == "ab..."
        assert truncate_text(None) == ""

    def test_report_time_falls_back_to_utc(self):
        stamp = get_report_time("Not/AZone")
        assert isinstance(stamp, datetime)
        assert stamp.utcoffset().total_seconds() == 0

    def test_stopwatch_non_negative(self):
        assert Stopwatch().elapsed_ms() >= 0
