"""Polynomial automorphism toolkit package"""
# 多項式自己同型の検証ツールキット

__version__ = "1.0.0"
