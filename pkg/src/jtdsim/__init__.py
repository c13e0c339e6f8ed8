"""Monte Carlo simulator and detection-statistics toolkit for Josephson
threshold detectors: stochastic phase dynamics under a swept bias current,
switching-current distributions, and ROC/AUC signal-detection analysis."""

from .discriminator import (
    ConfusionRates,
    RocResult,
    auc,
    auc_star,
    confusion_rates,
    d_kc,
    roc_curve,
)
from .ensemble import EnsembleSpec, Scd, histogram, run_ensemble
from .langevin import (
    CwSignal,
    DriveSpec,
    JunctionConfig,
    NoSignal,
    PulseSignal,
    SwitchingEvent,
    dimensionless_temperature,
    integrate,
    integrate_with_path,
    noise_stream,
    signal_current,
)
from .protocol import (
    BandScanResult,
    DetectionOutcome,
    FluxModulation,
    SweepPoint,
    SweepResult,
    adiabaticity,
    bandwidth_scan,
    detect,
    detect_signal,
    dynamic_range,
    min_power,
    paired_specs,
    phi0_from_flux,
    sweep_amplitude,
    sweep_kappa,
    sweep_phi0,
)
from .washboard import (
    BarrierGeometry,
    EscapeRateParams,
    analytic_scd,
    barrier_height,
    plasma_frequency_ratio,
    potential,
    quantum_rate,
    switching_cdf,
    switching_density,
    thermal_rate,
)

__all__ = [
    "BandScanResult",
    "BarrierGeometry",
    "ConfusionRates",
    "CwSignal",
    "DetectionOutcome",
    "DriveSpec",
    "EnsembleSpec",
    "EscapeRateParams",
    "FluxModulation",
    "JunctionConfig",
    "NoSignal",
    "PulseSignal",
    "RocResult",
    "Scd",
    "SweepPoint",
    "SweepResult",
    "SwitchingEvent",
    "adiabaticity",
    "analytic_scd",
    "auc",
    "auc_star",
    "bandwidth_scan",
    "barrier_height",
    "confusion_rates",
    "d_kc",
    "detect",
    "detect_signal",
    "dimensionless_temperature",
    "dynamic_range",
    "histogram",
    "integrate",
    "integrate_with_path",
    "min_power",
    "noise_stream",
    "paired_specs",
    "phi0_from_flux",
    "plasma_frequency_ratio",
    "potential",
    "quantum_rate",
    "roc_curve",
    "run_ensemble",
    "signal_current",
    "sweep_amplitude",
    "sweep_kappa",
    "sweep_phi0",
    "switching_cdf",
    "switching_density",
    "thermal_rate",
]

__version__ = "0.1.0"
