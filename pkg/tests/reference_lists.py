"""Frozen reference lists used across the test suite.

All values were verified against independent brute-force computation before
being frozen here (see the adjacent tests, which re-derive each list).
"""

# Twin ranks m <= 18 (6m-1, 6m+1 both prime), their indices 6m, and the
# complementary non-ranks up to 19.
TWIN_RANKS_TO_18 = [1, 2, 3, 5, 7, 10, 12, 17, 18]
TWIN_INDICES_TO_108 = [6, 12, 18, 30, 42, 60, 72, 102, 108]
NON_RANKS_TO_19 = [4, 6, 8, 9, 11, 13, 14, 15, 16, 19]

# Admissible residue classes mod 5 and mod 35.
C5 = [0, 2, 3]
C7 = [0, 2, 3, 5, 7, 10, 12, 17, 18, 23, 25, 28, 30, 32, 33]

# Level-11 constants as printed in the source list: the 135 residue classes
# mod 385 plus the boundary value 2 = N(11/6), which is a twin rank (11, 13)
# sitting inside 11's struck class (its n = 0 offset).
C11_REFERENCE = [
    0, 2, 3, 5, 7, 10, 12, 17, 18, 23, 25, 28, 30, 32, 33, 37, 38, 40,
    45, 47, 52, 58, 60, 63, 65, 67, 70, 72, 73, 77, 80, 82, 87, 88, 93, 95, 98, 100, 102, 103,
    105, 107, 110, 115, 117, 122, 128, 133, 135, 137, 138, 140, 142, 143, 147, 150, 157,
    158, 165, 168, 170, 172, 173, 175, 177, 180, 182, 187, 192, 193, 198, 203, 205, 208,
    210, 212, 213, 215, 217, 220, 227, 228, 235, 238, 242, 243, 245, 247, 248, 250, 252,
    257, 263, 268, 270, 275, 278, 280, 282, 283, 285, 287, 290, 292, 297, 298, 303, 305,
    308, 312, 313, 315, 318, 320, 322, 325, 327, 333, 338, 340, 345, 347, 348, 352, 353,
    355, 357, 360, 362, 367, 368, 373, 375, 378, 380, 382,
]

# The pure class-level list drops the boundary value 2.
C11_CLASSES = [c for c in C11_REFERENCE if c != 2]

# Intruders among the level-11 constants: non-ranks whose parent exceeds 11.
INTRUDERS_11 = {28: 13, 37: 13, 60: 19, 63: 13, 65: 17, 67: 13, 73: 19}

# Initial non-ranks with parent prime 7 (one period of 35).
A7_INITIAL = [8, 13, 15, 20, 22, 27]

# Remnants below 748 at sieve level 61: all of them twin ranks.
REMNANTS_61_BELOW_748 = [
    1, 2, 3, 5, 7, 10, 12, 17, 18, 23, 25, 30, 32, 33, 38, 40, 45, 47, 52, 58,
    70, 72, 77, 87, 95, 100, 103, 107, 110, 135, 137, 138, 143, 147, 170, 172, 175, 177,
    182, 192, 205, 213, 215, 217, 220, 238, 242, 247, 248, 268, 270, 278, 283, 287, 298,
    312, 313, 322, 325, 333, 338, 347, 348, 352, 355, 357, 373, 378, 385, 390, 397, 425,
    432, 443, 448, 452, 455, 465, 467, 495, 500, 520, 528, 542, 543, 550, 555, 560, 562,
    565, 577, 578, 588, 590, 593, 597, 612, 628, 637, 642, 653, 655, 667, 670, 675, 682,
    688, 693, 703, 705, 707, 710, 712, 723, 737, 747,
]

# The eight simultaneous non-rank residues of {5, 7, 11} mod 385, keyed by the
# sign vector (s5, s7, s11); includes the worked member 64 = (-,+,-).
TRIPLE_FAMILY_5_7_11 = {
    ("-", "+", "-"): 64,
    ("-", "+", "+"): 134,
    ("+", "+", "-"): 141,
    ("-", "-", "-"): 174,
    ("+", "+", "+"): 211,
    ("-", "-", "+"): 244,
    ("+", "-", "-"): 251,
    ("+", "-", "+"): 321,
}
