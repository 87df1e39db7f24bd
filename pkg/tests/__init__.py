"""Tests for Concord"""
