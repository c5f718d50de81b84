"""Published statistics of the US patent citation network (NBER 1975-1999
citations, labeled patents only). Used as reproduction targets and as the
default sample studies for across-tier analyses."""

RAW_CITATIONS = 16_522_438
LABELED_CITATIONS = 13_968_440
GLOBAL_PL_ALPHA = 4.46

# category -> percent of vertices with an external in-link
EXTERNALLY_POPULAR_PCT = {1: 28, 2: 26, 3: 27, 4: 28, 5: 25, 6: 25}

# category -> (global-internal, global-external, internal-external) PCC
CATEGORY_PCC = {
    1: (0.91, 0.64, 0.25),
    2: (0.96, 0.45, 0.18),
    3: (0.97, 0.52, 0.28),
    4: (0.90, 0.65, 0.25),
    5: (0.86, 0.66, 0.19),
    6: (0.88, 0.62, 0.18),
}

# (to category, from a, from b) -> PCC of the two external channels
CATEGORY_CHANNEL_PCC = {
    (1, 2, 3): -0.13, (1, 2, 4): -0.08, (1, 2, 5): -0.05, (1, 2, 6): -0.19, (1, 3, 4): -0.18,
    (1, 3, 5): -0.18, (1, 3, 6): -0.15, (1, 4, 5): -0.11, (1, 4, 6): -0.21, (1, 5, 6): -0.14,
    (2, 1, 3): -0.14, (2, 1, 4): -0.05, (2, 1, 5): -0.04, (2, 1, 6): -0.17, (2, 3, 4): -0.02,
    (2, 3, 5): -0.13, (2, 3, 6): -0.21, (2, 4, 5): -0.09, (2, 4, 6): -0.09, (2, 5, 6): -0.17,
    (3, 1, 2): -0.14, (3, 1, 4): -0.18, (3, 1, 5): -0.10, (3, 1, 6): -0.13, (3, 2, 4): -0.04,
    (3, 2, 5): -0.16, (3, 2, 6): -0.21, (3, 4, 5): -0.21, (3, 4, 6): -0.23, (3, 5, 6): -0.15,
    (4, 1, 2): -0.13, (4, 1, 3): -0.19, (4, 1, 5): -0.12, (4, 1, 6): -0.22, (4, 2, 3): -0.07,
    (4, 2, 5): -0.13, (4, 2, 6): -0.13, (4, 3, 5): -0.14, (4, 3, 6): -0.19, (4, 5, 6): -0.18,
    (5, 1, 2): -0.19, (5, 1, 3): -0.07, (5, 1, 4): -0.17, (5, 1, 6): -0.16, (5, 2, 3): -0.12,
    (5, 2, 4): -0.07, (5, 2, 6): -0.20, (5, 3, 4): -0.12, (5, 3, 6): -0.07, (5, 4, 6): -0.23,
    (6, 1, 2): -0.20, (6, 1, 3): -0.05, (6, 1, 4): -0.19, (6, 1, 5): -0.09, (6, 2, 3): -0.19,
    (6, 2, 4): -0.12, (6, 2, 5): -0.14, (6, 3, 4): -0.20, (6, 3, 5): -0.11, (6, 4, 5): -0.15,
}

# subcategory -> (global best, internal best, external best, % ext. popular, PCC triple)
SUBCATEGORY_RESULTS = {
    11: ("TPL", "TPL", "TPL, LN", 27, (0.8, 0.75, 0.2)),
    12: ("TPL", "TPL", "TPL", 28, (0.82, 0.74, 0.22)),
    13: ("TPL", "TPL", "TPL", 29, (0.92, 0.57, 0.21)),
    14: ("TPL", "TPL", "TPL, PL, LN", 18, (0.82, 0.72, 0.19)),
    15: ("TPL", "TPL", "TPL, PL", 24, (0.94, 0.64, 0.33)),
    19: ("TPL", "TPL", "TPL, PL", 10, (0.96, 0.46, 0.2)),
    21: ("TPL", "TPL", "TPL", 16, (0.95, 0.54, 0.26)),
    22: ("TPL", "TPL", "TPL", 23, (0.96, 0.6, 0.36)),
    23: ("TPL", "TPL", "TPL", 27, (0.96, 0.59, 0.34)),
    24: ("TPL", "TPL", "TPL", 17, (0.91, 0.61, 0.22)),
    31: ("TPL", "TPL", "TPL, PL, LN", 7, (0.98, 0.49, 0.31)),
    32: ("SE", "SE", "TPL, PL", 7, (0.98, 0.37, 0.17)),
    33: ("TPL", "TPL", "TPL, PL", 14, (0.96, 0.51, 0.24)),
    39: ("TPL", "TPL", "TPL", 19, (0.9, 0.79, 0.43)),
    41: ("TPL", "TPL", "TPL, PL, LN", 18, (0.91, 0.51, 0.09)),
    42: ("TPL", "TPL", "TPL, PL", 13, (0.96, 0.46, 0.2)),
    43: ("TPL", "TPL", "TPL, PL", 12, (0.95, 0.55, 0.24)),
    44: ("TPL", "TPL", "TPL, PL", 18, (0.91, 0.5, 0.1)),
    45: ("TPL", "TPL", "TPL, PL", 14, (0.92, 0.51, 0.15)),
    46: ("TPL", "TPL", "TPL, PL, LN", 16, (0.97, 0.41, 0.16)),
    49: ("TPL", "TPL", "TPL, PL, LN", 13, (0.95, 0.33, 0.01)),
    51: ("TPL", "TPL", "TPL, PL", 10, (0.95, 0.43, 0.12)),
    52: ("TPL", "TPL", "TPL, PL", 10, (0.94, 0.42, 0.08)),
    53: ("TPL", "TPL", "TPL, PL", 10, (0.96, 0.33, 0.06)),
    54: ("TPL", "TPL", "TPL, PL", 4, (0.98, 0.32, 0.12)),
    55: ("TPL", "TPL", "TPL, PL", 10, (0.95, 0.39, 0.08)),
    59: ("TPL", "TPL", "TPL, PL", 14, (0.95, 0.38, 0.07)),
    61: ("TPL", "TPL", "TPL, PL", 7, (0.91, 0.52, 0.11)),
    62: ("TPL", "TPL", "TPL, PL", 9, (0.97, 0.29, 0.04)),
    63: ("TPL", "TPL", "LN", 9, (0.95, 0.39, 0.08)),
    64: ("TPL", "TPL", "TPL, PL", 8, (0.98, 0.29, 0.07)),
    65: ("TPL", "TPL", "LN", 16, (0.92, 0.44, 0.07)),
    66: ("TPL", "TPL", "TPL, PL, LN", 11, (0.94, 0.37, 0.05)),
    67: ("TPL", "TPL", "TPL, PL, LN", 23, (0.88, 0.51, 0.04)),
    68: ("TPL", "TPL", "TPL, PL, LN", 16, (0.95, 0.58, 0.29)),
    69: ("TPL", "TPL", "TPL, PL", 10, (0.94, 0.46, 0.13)),
}

# (to category, from subcategory) -> best-fit label
CROSS_TIER_FITS = {
    (4, 21): "LN", (4, 22): "TPL", (6, 51): "LN", (6, 52): "LN", (6, 53): "TPL, PL, LN",
    (5, 61): "TPL, PL, LN", (5, 62): "TPL, PL, LN", (5, 69): "TPL, PL, LN", (4, 69): "TPL, PL, LN",
}

# (to category, from subcategory a, from subcategory b) -> PCC
CROSS_TIER_PCC = {
    (4, 21, 22): 0.03, (4, 21, 69): -0.22, (4, 22, 69): -0.21,
    (5, 61, 62): -0.25, (5, 62, 69): -0.1, (5, 61, 69): -0.15,
    (6, 51, 52): -0.2, (6, 52, 53): -0.28, (6, 51, 53): -0.28,
}

# (to subcategory, from subcategory a, from subcategory b) -> PCC
SUBCATEGORY_CHANNEL_PCC = {
    (11, 12, 13): -0.11, (11, 13, 14): -0.13, (11, 14, 15): -0.2,
    (22, 21, 23): -0.02, (22, 23, 24): -0.15, (22, 21, 24): -0.13,
    (31, 32, 33): -0.12, (31, 33, 39): 0.03, (31, 32, 39): 0.06,
    (43, 41, 42): -0.37, (43, 42, 44): -0.17, (43, 41, 44): -0.31,
    (52, 51, 53): -0.28, (52, 53, 54): -0.29, (52, 51, 54): -0.05,
    (67, 62, 63): -0.21, (67, 63, 64): -0.26, (67, 64, 65): -0.31,
}
