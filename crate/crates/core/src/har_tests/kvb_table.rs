// Generated by examples/kvb_critical_values.rs; do not edit by hand.
// 50000 paths, 2000 steps, seed 20240601.

/// Two-sided critical values at α = 0.005, 0.010, …, 0.500.
pub const KVB_CRITICAL_VALUES: [f64; 100] = [
    8.239439, // 0.005
    7.169312, // 0.010
    6.601328, // 0.015
    6.184970, // 0.020
    5.854032, // 0.025
    5.588629, // 0.030
    5.364987, // 0.035
    5.163513, // 0.040
    4.988658, // 0.045
    4.831278, // 0.050
    4.676059, // 0.055
    4.547942, // 0.060
    4.426141, // 0.065
    4.311320, // 0.070
    4.212696, // 0.075
    4.110331, // 0.080
    4.023751, // 0.085
    3.934291, // 0.090
    3.855466, // 0.095
    3.782681, // 0.100
    3.705058, // 0.105
    3.636360, // 0.110
    3.572740, // 0.115
    3.511551, // 0.120
    3.452966, // 0.125
    3.392798, // 0.130
    3.338392, // 0.135
    3.288058, // 0.140
    3.236825, // 0.145
    3.188489, // 0.150
    3.135598, // 0.155
    3.085493, // 0.160
    3.039029, // 0.165
    2.995794, // 0.170
    2.949347, // 0.175
    2.911177, // 0.180
    2.872703, // 0.185
    2.833527, // 0.190
    2.792636, // 0.195
    2.748805, // 0.200
    2.715465, // 0.205
    2.678142, // 0.210
    2.643675, // 0.215
    2.608778, // 0.220
    2.573269, // 0.225
    2.539256, // 0.230
    2.508137, // 0.235
    2.478483, // 0.240
    2.448521, // 0.245
    2.416614, // 0.250
    2.388192, // 0.255
    2.357350, // 0.260
    2.325840, // 0.265
    2.299238, // 0.270
    2.272423, // 0.275
    2.244679, // 0.280
    2.215220, // 0.285
    2.186960, // 0.290
    2.162693, // 0.295
    2.136156, // 0.300
    2.109787, // 0.305
    2.084849, // 0.310
    2.058336, // 0.315
    2.031285, // 0.320
    2.006454, // 0.325
    1.986316, // 0.330
    1.963884, // 0.335
    1.941865, // 0.340
    1.919523, // 0.345
    1.896899, // 0.350
    1.871576, // 0.355
    1.849398, // 0.360
    1.828030, // 0.365
    1.807702, // 0.370
    1.787685, // 0.375
    1.765669, // 0.380
    1.743768, // 0.385
    1.723967, // 0.390
    1.704385, // 0.395
    1.686656, // 0.400
    1.667467, // 0.405
    1.648182, // 0.410
    1.629496, // 0.415
    1.609904, // 0.420
    1.592264, // 0.425
    1.575290, // 0.430
    1.556663, // 0.435
    1.536500, // 0.440
    1.518067, // 0.445
    1.499597, // 0.450
    1.481039, // 0.455
    1.460828, // 0.460
    1.443442, // 0.465
    1.424061, // 0.470
    1.406199, // 0.475
    1.389652, // 0.480
    1.373157, // 0.485
    1.356336, // 0.490
    1.339651, // 0.495
    1.322124, // 0.500
];
