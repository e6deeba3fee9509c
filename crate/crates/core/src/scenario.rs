//! Physical parameters of a coexistence scenario.
//!
//! Everything inside a [`Scenario`] is stored in SI base units (meters, hertz,
//! watts, kelvin, radians) with antenna gains as linear power ratios. Unit
//! conversion happens only at the document boundary in [`Scenario::from_toml_str`].
//!
//! # Document schema
//!
//! A scenario document is TOML with four optional sections. Every key carries
//! its unit as a suffix, and each field may be given in any one of the listed
//! units (giving the same field twice in different units is an error). Missing
//! fields fall back to the reference values shown.
//!
//! ```toml
//! [network]
//! cluster_intensity_per_km2 = 1.0e-4   # or _per_m2
//! bs_intensity = 100.0                 # mean base stations per cluster
//! path_loss_exponent = 2.0001
//! tx_power_w = 3.5                     # or _mw
//! carrier_frequency_ghz = 1.413        # or _hz, _khz, _mhz
//! bandwidth_mhz = 24.0                 # or _hz, _khz, _ghz
//!
//! [satellite]
//! earth_radius_km = 6371.0             # or _m
//! sat_center_distance_km = 7056.0      # or _m
//! incidence_angle_deg = 40.0           # or _rad
//! footprint_area_km2 = 1600.0          # or _m2
//! rfi_threshold_k = 1.3
//!
//! [physics]
//! light_speed_km_per_s = 300000.0      # or _m_per_s
//! boltzmann_j_per_k = 1.380649e-23
//!
//! [gain]
//! main_lobe_gain_db = 0.0              # or _linear
//! side_lobe_gain_db = -55.0            # or _linear
//! half_beamwidth_deg = 1.2             # or _rad
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Antenna lobe a group of clusters is seen through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lobe {
    Main,
    Side,
}

impl Lobe {
    pub const ALL: [Lobe; 2] = [Lobe::Main, Lobe::Side];

    pub fn as_str(self) -> &'static str {
        match self {
            Lobe::Main => "main",
            Lobe::Side => "side",
        }
    }
}

impl fmt::Display for Lobe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Lobe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Lobe::Main),
            "side" => Ok(Lobe::Side),
            other => Err(Error::Malformed(format!(
                "unknown lobe `{other}` (expected `main` or `side`)"
            ))),
        }
    }
}

/// Two-level sectorized antenna gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainModel {
    /// Linear gain inside the main-lobe sector.
    pub main_lobe_gain: f64,
    /// Linear gain everywhere else.
    pub side_lobe_gain: f64,
    /// Sector boundary, radians from boresight.
    pub half_beamwidth: f64,
}

impl GainModel {
    /// Gain seen at `deviation` radians off the main-lobe axis. The boundary
    /// itself belongs to the main lobe.
    pub fn gain_at(&self, deviation: f64) -> f64 {
        if deviation.abs() <= self.half_beamwidth {
            self.main_lobe_gain
        } else {
            self.side_lobe_gain
        }
    }

    pub fn lobe_gain(&self, lobe: Lobe) -> f64 {
        match lobe {
            Lobe::Main => self.main_lobe_gain,
            Lobe::Side => self.side_lobe_gain,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("gain.main_lobe_gain", self.main_lobe_gain)?;
        positive("gain.side_lobe_gain", self.side_lobe_gain)?;
        if !(self.half_beamwidth > 0.0 && self.half_beamwidth < PI / 2.0) {
            return Err(Error::InvalidField {
                field: "gain.half_beamwidth".into(),
                reason: format!("{} rad is not inside (0, pi/2)", self.half_beamwidth),
            });
        }
        Ok(())
    }
}

/// Full parameter set of one run, in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    /// Cluster centers per square meter.
    pub cluster_intensity: f64,
    /// Poisson mean of base stations per cluster.
    pub bs_intensity: f64,
    pub path_loss_exponent: f64,
    /// Transmit power per base station, watts.
    pub tx_power: f64,
    pub carrier_frequency: f64,
    pub bandwidth: f64,
    pub light_speed: f64,
    pub boltzmann: f64,
    pub earth_radius: f64,
    /// Distance from the Earth's center to the satellite.
    pub sat_center_distance: f64,
    /// Boresight angle from nadir, radians.
    pub incidence_angle: f64,
    /// Area of the main-lobe footprint, square meters.
    pub footprint_area: f64,
    pub gain: GainModel,
    /// Acceptable mean RFI temperature, kelvin.
    pub rfi_threshold: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self::reference()
    }
}

impl Scenario {
    /// The reference L-band parameter set: one city-sized cluster per
    /// 10 000 km², 100 base stations per cluster, 3.5 W at 1.413 GHz over
    /// 24 MHz, a radiometer 685 km above a 6371 km Earth with a 0 dB / -55 dB
    /// sectorized antenna.
    pub fn reference() -> Self {
        Scenario {
            cluster_intensity: 1.0e-10,
            bs_intensity: 100.0,
            path_loss_exponent: 2.0001,
            tx_power: 3.5,
            carrier_frequency: 1.413e9,
            bandwidth: 24.0e6,
            light_speed: 3.0e8,
            boltzmann: 1.380649e-23,
            earth_radius: 6.371e6,
            sat_center_distance: 7.056e6,
            incidence_angle: 40.0_f64.to_radians(),
            footprint_area: 1.6e9,
            gain: GainModel {
                main_lobe_gain: 1.0,
                side_lobe_gain: 10f64.powf(-5.5),
                half_beamwidth: 1.2_f64.to_radians(),
            },
            rfi_threshold: 1.3,
        }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Parses a scenario document, converting every field to SI and
    /// validating the result.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let doc: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Malformed(e.message().to_string()))?;
        let mut scenario = Scenario::reference();
        let mut seen = Vec::new();

        for (section, value) in &doc {
            if !SECTIONS.contains(&section.as_str()) {
                return Err(Error::Malformed(format!("unknown section `[{section}]`")));
            }
            let table = value.as_table().ok_or_else(|| {
                Error::Malformed(format!("`{section}` must be a table"))
            })?;
            for (key, raw) in table {
                let (field, unit) = resolve_key(section, key)?;
                let qualified = format!("{section}.{}", field.base);
                if seen.contains(&qualified) {
                    return Err(Error::Malformed(format!(
                        "`{qualified}` given more than once (in different units)"
                    )));
                }
                let number = match raw {
                    toml::Value::Float(v) => *v,
                    toml::Value::Integer(v) => *v as f64,
                    _ => {
                        return Err(Error::Malformed(format!(
                            "`{section}.{key}` must be a number"
                        )))
                    }
                };
                (field.set)(&mut scenario, unit.to_si(number));
                seen.push(qualified);
            }
        }

        scenario.validate()?;
        Ok(scenario)
    }

    /// Renders the scenario back into a document using SI unit keys only.
    pub fn to_si_toml(&self) -> String {
        let mut doc = toml::Table::new();
        for field in FIELDS {
            let section = doc
                .entry(field.section)
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .expect("section is a table");
            let si = &field.units[0];
            let key = if si.suffix.is_empty() {
                field.base.to_string()
            } else {
                format!("{}_{}", field.base, si.suffix)
            };
            section.insert(key, toml::Value::Float((field.get)(self)));
        }
        toml::to_string(&doc).expect("plain float tables always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("network.cluster_intensity", self.cluster_intensity)?;
        non_negative("network.bs_intensity", self.bs_intensity)?;
        positive("network.tx_power", self.tx_power)?;
        positive("network.carrier_frequency", self.carrier_frequency)?;
        positive("network.bandwidth", self.bandwidth)?;
        positive("physics.light_speed", self.light_speed)?;
        positive("physics.boltzmann", self.boltzmann)?;
        positive("satellite.earth_radius", self.earth_radius)?;
        positive("satellite.sat_center_distance", self.sat_center_distance)?;
        positive("satellite.incidence_angle", self.incidence_angle)?;
        positive("satellite.footprint_area", self.footprint_area)?;
        positive("satellite.rfi_threshold", self.rfi_threshold)?;
        self.gain.validate()?;

        if !self.path_loss_exponent.is_finite() || self.path_loss_exponent <= 2.0 {
            return Err(Error::AlphaOutOfRange {
                alpha: self.path_loss_exponent,
                min: 2.0,
                max: f64::INFINITY,
            });
        }
        if self.sat_center_distance <= self.earth_radius {
            return Err(Error::InvalidField {
                field: "satellite.sat_center_distance".into(),
                reason: "satellite must orbit above the Earth's surface".into(),
            });
        }
        if self.incidence_angle >= PI / 2.0 {
            return Err(Error::InvalidField {
                field: "satellite.incidence_angle".into(),
                reason: "boresight must point below the horizontal".into(),
            });
        }
        let eta = self.eta();
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidField {
                field: "network.tx_power".into(),
                reason: format!("p_tx / (k_b * bandwidth) = {eta} is not finite and positive"),
            });
        }
        Ok(())
    }

    /// Brightness temperature of the full transmit power, `p_tx / (k_b * bandwidth)`.
    pub fn eta(&self) -> f64 {
        self.tx_power / (self.boltzmann * self.bandwidth)
    }

    /// Free-space wavelength factor `c / (4 pi f)`, meters.
    pub fn omega(&self) -> f64 {
        self.light_speed / (4.0 * PI * self.carrier_frequency)
    }

    /// Nyquist conversion of received power (watts) to kelvin.
    pub fn power_to_temperature(&self, power: f64) -> Result<f64> {
        if !(power >= 0.0) {
            return Err(Error::OutOfRange {
                what: "received power",
                value: power,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(power / (self.boltzmann * self.bandwidth))
    }

    pub fn antenna_gain(&self, deviation: f64) -> f64 {
        self.gain.gain_at(deviation)
    }

    pub fn with_path_loss_exponent(&self, alpha: f64) -> Scenario {
        Scenario {
            path_loss_exponent: alpha,
            ..self.clone()
        }
    }

    pub fn with_bs_intensity(&self, lambda_bs: f64) -> Scenario {
        Scenario {
            bs_intensity: lambda_bs,
            ..self.clone()
        }
    }
}

fn positive(field: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            field: field.into(),
            value,
        })
    }
}

fn non_negative(field: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            field: field.into(),
            value,
        })
    }
}

const SECTIONS: [&str; 4] = ["network", "satellite", "physics", "gain"];

#[derive(Clone, Copy)]
enum Conversion {
    Scale(f64),
    Decibel,
}

struct Unit {
    suffix: &'static str,
    conversion: Conversion,
}

impl Unit {
    fn to_si(&self, value: f64) -> f64 {
        match self.conversion {
            Conversion::Scale(k) => value * k,
            Conversion::Decibel => 10f64.powf(value / 10.0),
        }
    }
}

const fn unit(suffix: &'static str, factor: f64) -> Unit {
    Unit {
        suffix,
        conversion: Conversion::Scale(factor),
    }
}

struct Field {
    section: &'static str,
    base: &'static str,
    /// First entry is the SI unit used when re-emitting.
    units: &'static [Unit],
    get: fn(&Scenario) -> f64,
    set: fn(&mut Scenario, f64),
}

const DEG: f64 = PI / 180.0;
const DIMENSIONLESS: &[Unit] = &[unit("", 1.0)];
const LENGTH: &[Unit] = &[unit("m", 1.0), unit("km", 1e3)];
const FREQUENCY: &[Unit] = &[
    unit("hz", 1.0),
    unit("khz", 1e3),
    unit("mhz", 1e6),
    unit("ghz", 1e9),
];
const ANGLE: &[Unit] = &[unit("rad", 1.0), unit("deg", DEG)];
const GAIN: &[Unit] = &[
    unit("linear", 1.0),
    Unit {
        suffix: "db",
        conversion: Conversion::Decibel,
    },
];

const FIELDS: &[Field] = &[
    Field {
        section: "network",
        base: "cluster_intensity",
        units: &[unit("per_m2", 1.0), unit("per_km2", 1e-6)],
        get: |s| s.cluster_intensity,
        set: |s, v| s.cluster_intensity = v,
    },
    Field {
        section: "network",
        base: "bs_intensity",
        units: DIMENSIONLESS,
        get: |s| s.bs_intensity,
        set: |s, v| s.bs_intensity = v,
    },
    Field {
        section: "network",
        base: "path_loss_exponent",
        units: DIMENSIONLESS,
        get: |s| s.path_loss_exponent,
        set: |s, v| s.path_loss_exponent = v,
    },
    Field {
        section: "network",
        base: "tx_power",
        units: &[unit("w", 1.0), unit("mw", 1e-3)],
        get: |s| s.tx_power,
        set: |s, v| s.tx_power = v,
    },
    Field {
        section: "network",
        base: "carrier_frequency",
        units: FREQUENCY,
        get: |s| s.carrier_frequency,
        set: |s, v| s.carrier_frequency = v,
    },
    Field {
        section: "network",
        base: "bandwidth",
        units: FREQUENCY,
        get: |s| s.bandwidth,
        set: |s, v| s.bandwidth = v,
    },
    Field {
        section: "satellite",
        base: "earth_radius",
        units: LENGTH,
        get: |s| s.earth_radius,
        set: |s, v| s.earth_radius = v,
    },
    Field {
        section: "satellite",
        base: "sat_center_distance",
        units: LENGTH,
        get: |s| s.sat_center_distance,
        set: |s, v| s.sat_center_distance = v,
    },
    Field {
        section: "satellite",
        base: "incidence_angle",
        units: ANGLE,
        get: |s| s.incidence_angle,
        set: |s, v| s.incidence_angle = v,
    },
    Field {
        section: "satellite",
        base: "footprint_area",
        units: &[unit("m2", 1.0), unit("km2", 1e6)],
        get: |s| s.footprint_area,
        set: |s, v| s.footprint_area = v,
    },
    Field {
        section: "satellite",
        base: "rfi_threshold",
        units: &[unit("k", 1.0)],
        get: |s| s.rfi_threshold,
        set: |s, v| s.rfi_threshold = v,
    },
    Field {
        section: "physics",
        base: "light_speed",
        units: &[unit("m_per_s", 1.0), unit("km_per_s", 1e3)],
        get: |s| s.light_speed,
        set: |s, v| s.light_speed = v,
    },
    Field {
        section: "physics",
        base: "boltzmann",
        units: &[unit("j_per_k", 1.0)],
        get: |s| s.boltzmann,
        set: |s, v| s.boltzmann = v,
    },
    Field {
        section: "gain",
        base: "main_lobe_gain",
        units: GAIN,
        get: |s| s.gain.main_lobe_gain,
        set: |s, v| s.gain.main_lobe_gain = v,
    },
    Field {
        section: "gain",
        base: "side_lobe_gain",
        units: GAIN,
        get: |s| s.gain.side_lobe_gain,
        set: |s, v| s.gain.side_lobe_gain = v,
    },
    Field {
        section: "gain",
        base: "half_beamwidth",
        units: ANGLE,
        get: |s| s.gain.half_beamwidth,
        set: |s, v| s.gain.half_beamwidth = v,
    },
];

fn resolve_key(section: &str, key: &str) -> Result<(&'static Field, &'static Unit)> {
    for field in FIELDS.iter().filter(|f| f.section == section) {
        for unit in field.units {
            let matches = if unit.suffix.is_empty() {
                key == field.base
            } else {
                key.strip_prefix(field.base)
                    .and_then(|rest| rest.strip_prefix('_'))
                    == Some(unit.suffix)
            };
            if matches {
                return Ok((field, unit));
            }
        }
    }
    Err(Error::Malformed(format!(
        "unknown key `{key}` in section `[{section}]`"
    )))
}
