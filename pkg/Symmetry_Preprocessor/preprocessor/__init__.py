"""
Symmetry-Breaking Preprocessor Package
Detects symmetries of ground disjunctive programs and adds lex-leader constraints
"""

__version__ = "1.0.0"
