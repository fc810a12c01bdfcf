"""mapmix: a bilingual Map Task chat platform whose bot replies are
rewritten online by configurable Spanish-English code-switching strategies,
with game-state tracking, route scoring, dialog metrics, session
persistence, and dataset export."""

__version__ = "0.1.0"
