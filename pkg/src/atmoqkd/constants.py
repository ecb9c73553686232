"""Physical constants and reference conditions (CODATA 2018 where applicable)."""

SPEED_OF_LIGHT = 299_792_458.0  # m s-1
BOLTZMANN = 1.380649e-23  # J K-1
C2 = 1.438777  # second radiation constant, cm K
T_REF = 296.0  # K, line-parameter reference temperature
P_REF = 1.0  # atm
ATM_PA = 101_325.0  # Pa per atm
AMU = 1.66053906660e-27  # kg

# molecule id -> (name, molecular mass [kg])
MOLECULES = {
    1: ("h2o", 18.010565 * AMU),
    7: ("o2", 31.98983 * AMU),
}

O2_VOLUME_MIXING_RATIO = 0.2095
