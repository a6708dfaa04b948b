//! Physical constants (SI, CODATA 2018).

/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.8541878128e-12;

/// Elementary charge (C).
pub const Q_E: f64 = 1.602176634e-19;

/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380649e-23;

/// Thermal voltage kT/q (V) at the given temperature (K).
pub fn thermal_voltage(temp: f64) -> f64 {
    K_B * temp / Q_E
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_voltage_room_temp() {
        let vt = thermal_voltage(300.0);
        assert!((vt - 0.025852).abs() < 1e-6);
    }
}
