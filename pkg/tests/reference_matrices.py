"""Hand-transcribed compact matrices of the bundled example networks.

Kept separate from the fixture files so that assembly is checked against an
independent transcription rather than against itself.
"""

import numpy as np

EX1_A = np.array([
    [1, 2, 0, 0, 0],
    [1, 0, 0, 0, 0],
    [1, -1, 1, 0, 0],
    [1, -1, 3, 2, 0],
    [1, -1, 4, 1, -1],
])
EX1_B = np.array([[0, 0], [1, 0], [0, 0], [0, 0], [0, 0]])

EX2_A = np.array([
    [1, 2, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 2, 0, 0],
    [0, 0, 1, 3, 2, 0, 0],
    [0, 0, -1, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0],
])
EX2_B = np.array([
    [0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 1, 0], [0, 0, 1], [0, 0, 1],
])
EX5_A = EX2_A
EX5_B = np.array([
    [0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 1, 0], [0, 0, 0], [0, 0, 0],
])

EX6_A = np.array([
    [1, 2, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 2, 0, 0],
    [0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0],
])
EX6_B = np.array([
    [0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 1],
])

EX7A_A = np.array([
    [1, 2, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 3, 2, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 1, 2, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 2],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
])
EX7B_A = np.array([
    [1, 2, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 1, 0, 0, 0, 0, 0],
    [1, 0, 1, 3, 2, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 1, 2, 0, 0],
    [0, 0, 0, 0, 0, 1, -1, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 2],
    [0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
])
EX7_C = np.array([
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0],
])

# Table of node eigenvalues and left eigenvectors for the three-node example,
# as printed (two decimals, truncated toward zero; 0.7071 given to four).
EX2_TABLE = {
    1: [(1, [[0, 1]])],
    2: [(1 + 1j * np.sqrt(2), [[-0.14 - 0.39j, -0.28 - 0.19j, -0.84]]),
        (1 - 1j * np.sqrt(2), [[-0.14 + 0.39j, -0.28 + 0.19j, -0.84]]),
        (2, [[0, -0.7071, -0.7071]])],
    3: [(0, [[0, 1]]), (1, [[1, 0]])],
}
