"""Infrastructure layer - configuration, scenario documents and file output"""
