/// Observables after `n` drive periods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StroboscopicRecord {
    pub n: u64,
    /// Stored energy `⟨H_B⟩ₙ − ⟨H_B⟩₀`.
    pub energy: f64,
    /// Average charging power `E(n)/(nT)`.
    pub power: f64,
    /// Variance of the battery Hamiltonian.
    pub var_battery: f64,
    /// Variance of the first-half charging Hamiltonian `H₁`.
    pub var_charging: f64,
    /// `⟨i[H₁, H_B]⟩`, the instantaneous power as the drive resumes.
    pub power_commutator: f64,
    /// `2√(varB · varC) − |⟨i[H₁, H_B]⟩|`; non-negative by the Robertson
    /// uncertainty relation.
    pub bound_slack: f64,
}

impl StroboscopicRecord {
    pub(crate) fn assemble(
        n: u64,
        period: f64,
        energy: f64,
        var_battery: f64,
        var_charging: f64,
        power_commutator: f64,
    ) -> Self {
        let var_battery = var_battery.max(0.0);
        let var_charging = var_charging.max(0.0);
        Self {
            n,
            energy,
            power: energy / (n as f64 * period),
            var_battery,
            var_charging,
            power_commutator,
            bound_slack: 2.0 * (var_battery * var_charging).sqrt() - power_commutator.abs(),
        }
    }
}
