"""Wright functions, Mittag-Leffler functions and the M_{alpha,beta} distributions."""
