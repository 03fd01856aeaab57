"""Reference data of the published FER curves and pinned fixtures"""

# RM(128,64) over BPSK-AWGN, {curve: {Eb/N0 dB: FER}}
RM128_FER = {
    'sc': {2.0: 0.3944, 2.5: 0.2477, 3.0: 0.1311, 3.5: 0.06, 4.0: 0.0246, 4.5: 0.00705119,
           5.0: 0.00135142, 5.5: 0.000228076, 6.0: 2.55069e-05},
    'scl2': {2.0: 0.2148, 2.5: 0.1038, 3.0: 0.0425, 3.5: 0.0139, 4.0: 0.00285747,
             4.5: 0.000455436, 5.0: 5.86839e-05, 5.5: 3.16132e-06},
    'scl4': {2.0: 0.1174, 2.5: 0.0455, 3.0: 0.015, 3.5: 0.00266489, 4.0: 0.000448867,
             4.5: 4.13626e-05, 5.0: 2.57645e-06},
    'scl8': {2.0: 0.0667, 2.5: 0.0214, 3.0: 0.00519292, 3.5: 0.000914854, 4.0: 0.000111186,
             4.5: 6.8569e-06},
    'scl16': {2.0: 0.0401, 2.5: 0.0104, 3.0: 0.00193945, 3.5: 0.000250297, 4.0: 2.1333e-05},
    'spsc': {2.0: 0.2532, 2.5: 0.1369, 3.0: 0.0596, 3.5: 0.0216, 4.0: 0.0067714,
             4.5: 0.00139978, 5.0: 0.000209307, 5.5: 2.01349e-05},
    'spscl2': {2.0: 0.1224, 2.5: 0.0481, 3.0: 0.0142, 3.5: 0.00345197, 4.0: 0.00065463,
               4.5: 6.93805e-05, 5.0: 6.78433e-06},
    'spscl4': {2.0: 0.0631, 2.5: 0.0194, 3.0: 0.0042555, 3.5: 0.000628615, 4.0: 8.62598e-05,
               4.5: 7.23574e-06},
    'spscl8': {2.0: 0.0363, 2.5: 0.00940911, 3.0: 0.00168169, 3.5: 0.000199533,
               4.0: 2.19217e-05},
    'spscl16': {2.0: 0.0233, 2.5: 0.00575871, 3.0: 0.000895937, 3.5: 0.000126085,
                4.0: 1.39234e-05},
    'map_bound': {2.0: 0.0162, 2.5: 0.0037802, 3.0: 0.000641206, 3.5: 0.000109529,
                  4.0: 1.23583e-05},
}

# P(128,64) built at 6 dB, CRC-11 on the list decoders
POLAR128_FER = {
    'sc': {2.0: 0.2316, 2.5: 0.1192, 3.0: 0.0486, 3.5: 0.0159, 4.0: 0.00458842,
           4.5: 0.000801796, 5.0: 0.000147126, 5.5: 1.34881e-05},
    'scl2': {2.0: 0.314, 2.5: 0.1702, 3.0: 0.0752, 3.5: 0.0247, 4.0: 0.0065, 4.5: 0.00163244,
             5.0: 0.000189225, 5.5: 1.48e-05},
    'scl4': {2.0: 0.1958, 2.5: 0.087, 3.0: 0.0303, 3.5: 0.0076, 4.0: 0.00156878,
             4.5: 0.000137151, 5.0: 1.33e-05},
    'scl8': {2.0: 0.1222, 2.5: 0.0479, 3.0: 0.0136, 3.5: 0.00269818, 4.0: 4.47e-04,
             4.5: 2.70e-05},
    'scl16': {2.0: 0.0815, 2.5: 0.0256, 3.0: 0.0057, 3.5: 0.00108324, 4.0: 1.22e-04,
              4.5: 6.37e-06},
    'spsc': {2.0: 0.188, 2.5: 0.0919, 3.0: 0.0371, 3.5: 0.0116, 4.0: 0.00292929,
             4.5: 0.000548342, 5.0: 7.58e-05, 5.5: 8.86e-06},
    'spscl2': {2.0: 0.2748, 2.5: 0.1422, 3.0: 0.0626, 3.5: 0.0213, 4.0: 0.0055, 4.5: 0.001149,
               5.0: 1.22e-04, 5.5: 1.30e-05},
    'spscl4': {2.0: 0.1673, 2.5: 0.0727, 3.0: 0.0247, 3.5: 0.0055, 4.0: 0.00109187,
               4.5: 0.000112009, 5.0: 8.55e-06},
    'spscl8': {2.0: 0.1057, 2.5: 0.0367, 3.0: 0.0093, 3.5: 0.00188693, 4.0: 0.000285316,
               4.5: 1.81e-05},
    'spscl16': {2.0: 6.74e-02, 2.5: 2.03e-02, 3.0: 4.53e-03, 3.5: 7.34e-04, 4.0: 6.90e-05,
                4.5: 3.33e-06},
}

# Relative widening of the 95% interval in the reproduction checks
ACCEPTANCE_MARGIN = 0.25
ACCEPTANCE_MIN_ERRORS = 300

# CRC-11 check bits of a payload whose only 1 is its last bit
CRC11_SINGLE_BIT_CHECK = [1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]

# 2 artanh(tanh(1) tanh(-1.5))
F_EXACT_2_MINUS_3 = -1.69346

RM16_11_INFO = (3, 5, 6, 7, 9, 10, 11, 12, 13, 14, 15)

RM_DIMENSIONS_N3 = {1: 0, 4: 1, 7: 2, 8: 3}

PERMUTATION_COUNTS = {1: 1, 2: 2, 3: 12, 4: 576, 5: 1658880}

# P(128,64) built at 6 dB by the Gaussian approximation
P128_64_INFO = (
    27, 29, 30, 31, 39, 43, 45, 46, 47, 51, 53, 54, 55, 57, 58, 59, 60, 61, 62, 63, 71, 75, 77,
    78, 79, 83, 85, 86, 87, 89, 90, 91, 92, 93, 94, 95, 99, 101, 102, 103, 104, 105, 106, 107,
    108, 109, 110, 111, 112, 113, 114, 115, 116, 117, 118, 119, 120, 121, 122, 123, 124, 125,
    126, 127,
)
