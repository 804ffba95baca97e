"""Follower-churn forensics toolkit.

Dataset ingestion, churn analytics, the 18-feature detection pipeline,
an RBF-SVM classifier trained from scratch, URL blacklist auditing, and
a market simulator for labeled desk-scale test data.
"""

__version__ = "0.1.0"
