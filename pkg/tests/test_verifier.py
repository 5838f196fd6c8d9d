"""
Unit tests for verifier module.
"""

import unittest
from unittest.mock import patch

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.errors import RepresentationError
from src.report import VerificationRecord
from src.verifier import VerificationSuite, merge_worst


class TestVerificationSuite(unittest.TestCase):
    """Test the threaded verification suite."""

    def test_n2_passes(self):
        """Test every family holds for N=2."""
        report = VerificationSuite(2, trials=5).run(max_workers=2, show_progress=False)
        self.assertTrue(report.passed, report.failures())
        identities = [record.identity for record in report.records]
        self.assertEqual(identities, sorted(identities))
        self.assertIn("geometry.boost_interval", identities)
        self.assertIn("cg.rank_one", identities)
        self.assertIn("cg.numerical_rank", identities)

    def test_n2_irreducible_pairing(self):
        """Test (fund, antifund) + (sym2, antisym2bar) is solved and factorizes for N=2."""
        records = VerificationSuite(2, trials=1).run_family("momentum")
        by_name = {record.identity: record for record in records}
        for name in ("momentum.irreducible.[P,J]", "momentum.irreducible.[P,K]", "momentum.irreducible.[P,P]",
                     "cg.irreducible.rank_one", "cg.irreducible.numerical_rank"):
            with self.subTest(identity=name):
                self.assertIn(name, by_name)
                self.assertTrue(by_name[name].passed)
        self.assertNotIn("momentum.irreducible.solution_dim", by_name)

    def test_irreducible_pairing_only_for_n2_plus(self):
        """Test the irreducible pairing is skipped for P- and other N."""
        for n, eps_p in ((2, -1), (3, 1)):
            with self.subTest(n=n, eps_p=eps_p):
                records = VerificationSuite(n, eps_p=eps_p, trials=1).run_family("momentum")
                self.assertFalse(any("irreducible" in record.identity for record in records))

    def test_n3_minus_passes(self):
        """Test every family holds for N=3 with the P- family."""
        report = VerificationSuite(3, eps_p=-1, trials=3).run(max_workers=4, show_progress=False)
        self.assertTrue(report.passed, report.failures())
        self.assertTrue(report.get("geometry.interval_witness").passed)
        self.assertNotIn("geometry.boost_interval", [record.identity for record in report.records])

    def test_n1_passes(self):
        """Test the degenerate N=1 algebra."""
        suite = VerificationSuite(1, trials=2)
        self.assertNotIn("subspace", suite.family_names())
        self.assertNotIn("witness", suite.family_names())
        self.assertTrue(suite.run(max_workers=1, show_progress=False).passed)

    def test_fault_injection_fails(self):
        """Test a perturbed d makes the report fail."""
        report = VerificationSuite(2, trials=2, inject_fault=True).run(max_workers=2, show_progress=False)
        self.assertFalse(report.passed)
        self.assertFalse(report.get("structure.closure.anticommutator").passed)
        self.assertTrue(report.get("structure.closure.commutator").passed)

    def test_deterministic(self):
        """Test identical settings give identical records."""
        first = VerificationSuite(2, seed=3, trials=4).run(max_workers=3, show_progress=False)
        second = VerificationSuite(2, seed=3, trials=4).run(max_workers=1, show_progress=False)
        self.assertEqual(first.to_json(), second.to_json())

    def test_shutdown_skips_families(self):
        """Test a shutdown request skips remaining families."""
        suite = VerificationSuite(2, trials=1)
        suite.set_shutdown_flag(True)
        self.assertEqual(suite.run_family("basis"), [])

    def test_error_becomes_failing_record(self):
        """Test a construction error is reported instead of raised."""
        suite = VerificationSuite(2, trials=1)
        with patch.object(suite, 'check_similarity', side_effect=RepresentationError("boom")):
            records = suite.run_family("similarity")
        self.assertEqual(len(records), 1)
        self.assertEqual(records[0].identity, "similarity.error")
        self.assertFalse(records[0].passed)


class TestMergeWorst(unittest.TestCase):
    """Test merging of repeated trials."""

    def test_keeps_largest(self):
        """Test the largest residual per identity survives."""
        records = [VerificationRecord.evaluate("a", 1e-12, 1e-10), VerificationRecord.evaluate("a", 1e-11, 1e-10),
                   VerificationRecord.evaluate("b", 1.0, 1e-10)]
        merged = {record.identity: record.residual for record in merge_worst(records)}
        self.assertEqual(merged, {"a": 1e-11, "b": 1.0})


if __name__ == '__main__':
    unittest.main()
