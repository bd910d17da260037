"""
Checking a published table
==========================

Three corrections to earlier outcome tables, replayed with the rule
engine: two cells that follow from rules alone, a transcription error
that contradicts search, and a claim that no rule supports.  The search
in the second check takes about a minute.
"""

from domineering import errata_suite

print(errata_suite())
