"""Domain layer - consensus models, graph theory and numerical core"""
