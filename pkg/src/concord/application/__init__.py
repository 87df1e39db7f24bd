"""Application layer - simulation, analysis and scenario orchestration services"""
