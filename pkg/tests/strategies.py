"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from bcontinuum.levicivita import LeviCivitaNumber

small_q = st.fractions(min_value=-3, max_value=5, max_denominator=6)
coef = st.fractions(min_value=-20, max_value=20, max_denominator=12).filter(lambda c: c != 0)


@st.composite
def lc_numbers(draw, min_lead=-2, max_lead=3, finite=False, trunc=8):
    lead = draw(st.fractions(min_value=0 if finite else min_lead, max_value=max_lead, max_denominator=4))
    extra = draw(st.lists(st.fractions(min_value=0, max_value=4, max_denominator=4), max_size=4))
    terms = [(lead, draw(coef))] + [(lead + Fraction(e) + Fraction(1, 4), draw(coef)) for e in extra]
    return LeviCivitaNumber(terms, trunc)


nonzero_lc = lc_numbers()
finite_lc = lc_numbers(finite=True)
