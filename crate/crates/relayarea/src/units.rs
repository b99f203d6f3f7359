//! Physical quantities written as `"<number> <unit>"` strings.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

/// A physical dimension: its name and the units it accepts.
pub trait Dimension {
    const NAME: &'static str;
    const UNITS: &'static [&'static str];
    /// Converts `value` in `unit` to the base unit, or `None` when the unit
    /// does not belong to this dimension.
    fn to_base(value: f64, unit: &str) -> Option<f64>;
}

macro_rules! dimension {
    ($(#[$m:meta])* $name:ident, $label:literal, [$($unit:literal => $conv:expr),+ $(,)?]) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name {}

        impl Dimension for $name {
            const NAME: &'static str = $label;
            const UNITS: &'static [&'static str] = &[$($unit),+];
            fn to_base(v: f64, unit: &str) -> Option<f64> {
                let f: fn(f64) -> f64 = match unit {
                    $($unit => $conv,)+
                    _ => return None,
                };
                Some(f(v))
            }
        }
    };
}

dimension!(
    /// Joules.
    Energy, "energy", ["J" => |v| v, "mJ" => |v| v * 1e-3, "uJ" => |v| v * 1e-6, "kJ" => |v| v * 1e3]
);
dimension!(
    /// Meters.
    Length, "length", ["m" => |v| v, "km" => |v| v * 1e3]
);
dimension!(
    /// Watts; `dBm` is converted.
    Power, "power", ["W" => |v| v, "mW" => |v| v * 1e-3, "dBm" => |v| 10f64.powf((v - 30.0) / 10.0)]
);
dimension!(
    /// Gigahertz.
    Frequency, "frequency", ["GHz" => |v| v, "MHz" => |v| v * 1e-3, "Hz" => |v| v * 1e-9]
);
dimension!(
    /// Decibels (ratios and deviations).
    Decibel, "decibel", ["dB" => |v| v]
);
dimension!(
    /// Antenna gain in dBi.
    Gain, "antenna gain", ["dBi" => |v| v]
);
dimension!(
    /// Degrees.
    Angle, "angle", ["deg" => |v| v, "rad" => |v| v.to_degrees()]
);
dimension!(
    /// Bits per channel use.
    Rate, "rate", ["bit/use" => |v| v, "bits/use" => |v| v]
);

/// A value of dimension `D` in its base unit.
pub struct Quantity<D: Dimension> {
    pub value: f64,
    _d: PhantomData<D>,
}

impl<D: Dimension> Quantity<D> {
    pub fn new(value: f64) -> Self {
        Quantity { value, _d: PhantomData }
    }
}

impl<D: Dimension> Clone for Quantity<D> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<D: Dimension> Copy for Quantity<D> {}

impl<D: Dimension> PartialEq for Quantity<D> {
    fn eq(&self, o: &Self) -> bool {
        self.value == o.value
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} base)", self.value, D::NAME)
    }
}

pub type Joules = Quantity<Energy>;
pub type Meters = Quantity<Length>;

/// Parses `"<number> <unit>"` (the space is optional).
pub fn parse<D: Dimension>(s: &str) -> Result<Quantity<D>, String> {
    let s = s.trim();
    let exponent = |i: usize, c: char| {
        (c == 'e' || c == 'E') && s[i + 1..].starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')
    };
    let split = s.char_indices().find(|&(i, c)| c.is_alphabetic() && !exponent(i, c)).map(|(i, _)| i);
    let Some(at) = split else {
        return Err(format!("{} `{s}` has no unit (expected one of {})", D::NAME, D::UNITS.join(", ")));
    };
    let (num, unit) = (s[..at].trim(), s[at..].trim());
    let v: f64 = num.parse().map_err(|_| format!("invalid number `{num}` in {} `{s}`", D::NAME))?;
    if !v.is_finite() {
        return Err(format!("{} `{s}` is not finite", D::NAME));
    }
    D::to_base(v, unit)
        .map(Quantity::new)
        .ok_or_else(|| format!("unit `{unit}` is not a {} unit (expected one of {})", D::NAME, D::UNITS.join(", ")))
}

impl<D: Dimension> std::str::FromStr for Quantity<D> {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse(s)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(de: De) -> Result<Self, De::Error> {
        struct V<D>(PhantomData<D>);
        impl<D: Dimension> Visitor<'_> for V<D> {
            type Value = Quantity<D>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a {} string such as \"1 {}\"", D::NAME, D::UNITS[0])
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Self::Value, E> {
                parse(s).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Err(E::custom(format!("{} `{v}` needs an explicit unit, e.g. \"{v} {}\"", D::NAME, D::UNITS[0])))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                self.visit_i64(v as i64)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Err(E::custom(format!("{} `{v}` needs an explicit unit, e.g. \"{v} {}\"", D::NAME, D::UNITS[0])))
            }
        }
        de.deserialize_any(V(PhantomData))
    }
}
