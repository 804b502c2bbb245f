"""Synthetic job-market analytics: corpus generation, feature engineering,
from-scratch models and an experiment pipeline for salary regression,
title classification and listing clustering."""

__version__ = "0.1.0"
