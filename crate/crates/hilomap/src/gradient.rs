//! Color gradient lookup tables.
//!
//! A gradient is a 256-entry RGB table indexed by an alpha byte. It is built
//! from ordered color stops; each stop lands on index `round(255 * position)`
//! exactly and the entries between adjacent stops are linear per-channel
//! interpolations.

use crate::error::{Error, Result};

/// One gradient anchor: a position in `[0, 1]` and its RGB color.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorStop {
    pub position: f64,
    pub color: [u8; 3],
}

impl ColorStop {
    pub fn new(position: f64, color: [u8; 3]) -> Self {
        Self { position, color }
    }
}

/// 256-entry alpha-byte to RGB lookup table.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientLut {
    table: [[u8; 3]; 256],
    stops: Vec<ColorStop>,
}

impl GradientLut {
    /// Build the table from stops.
    ///
    /// Requires at least two stops with strictly increasing positions, the
    /// first at 0.0 and the last at 1.0.
    pub fn build(stops: &[ColorStop]) -> Result<Self> {
        if stops.len() < 2 {
            return Err(Error::Config("gradient needs at least 2 stops".into()));
        }
        if stops[0].position != 0.0 {
            return Err(Error::Config("first gradient stop must be at 0.0".into()));
        }
        if stops[stops.len() - 1].position != 1.0 {
            return Err(Error::Config("last gradient stop must be at 1.0".into()));
        }
        for pair in stops.windows(2) {
            if !(pair[0].position < pair[1].position) {
                return Err(Error::Config(format!(
                    "gradient stop positions must be strictly increasing, got {} then {}",
                    pair[0].position, pair[1].position
                )));
            }
        }

        let mut table = [[0u8; 3]; 256];
        for pair in stops.windows(2) {
            let ia = (255.0 * pair[0].position).round() as usize;
            let ib = (255.0 * pair[1].position).round() as usize;
            if ia == ib {
                table[ib] = pair[1].color;
                continue;
            }
            for i in ia..=ib {
                let t = (i - ia) as f64 / (ib - ia) as f64;
                for ch in 0..3 {
                    let a = pair[0].color[ch] as f64;
                    let b = pair[1].color[ch] as f64;
                    table[i][ch] = (a + t * (b - a)).round() as u8;
                }
            }
        }
        Ok(Self {
            table,
            stops: stops.to_vec(),
        })
    }

    /// Parse a gradient spec: a preset name (`heat`, `diverging`) or a
    /// comma-separated list of `pos:#RRGGBB` stops.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.trim() {
            "heat" => Ok(Self::heat()),
            "diverging" => Ok(Self::diverging()),
            s => Self::build(&parse_stops(s)?),
        }
    }

    /// Low-to-high ramp, blue through cyan, green, and yellow to red.
    pub fn heat() -> Self {
        Self::build(&[
            ColorStop::new(0.0, [0x00, 0x00, 0xFF]),
            ColorStop::new(0.25, [0x00, 0xFF, 0xFF]),
            ColorStop::new(0.5, [0x00, 0xFF, 0x00]),
            ColorStop::new(0.75, [0xFF, 0xFF, 0x00]),
            ColorStop::new(1.0, [0xFF, 0x00, 0x00]),
        ])
        .expect("preset stops are valid")
    }

    /// Low-neutral-high ramp: blue to near-white to red.
    pub fn diverging() -> Self {
        Self::build(&[
            ColorStop::new(0.0, [0x21, 0x66, 0xAC]),
            ColorStop::new(0.5, [0xF7, 0xF7, 0xF7]),
            ColorStop::new(1.0, [0xB2, 0x18, 0x2B]),
        ])
        .expect("preset stops are valid")
    }

    #[inline]
    pub fn color(&self, index: u8) -> [u8; 3] {
        self.table[index as usize]
    }

    pub fn table(&self) -> &[[u8; 3]; 256] {
        &self.table
    }

    pub fn stops(&self) -> &[ColorStop] {
        &self.stops
    }
}

/// Parse `pos:#RRGGBB,pos:#RRGGBB,...` into stops.
pub fn parse_stops(spec: &str) -> Result<Vec<ColorStop>> {
    let mut stops = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        let (pos, color) = part
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("bad gradient stop '{part}', want pos:#RRGGBB")))?;
        let position: f64 = pos
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad gradient stop position '{pos}'")))?;
        if !(0.0..=1.0).contains(&position) {
            return Err(Error::Config(format!(
                "gradient stop position {position} outside [0, 1]"
            )));
        }
        stops.push(ColorStop::new(position, parse_hex_color(color.trim())?));
    }
    Ok(stops)
}

fn parse_hex_color(s: &str) -> Result<[u8; 3]> {
    let hex = s
        .strip_prefix('#')
        .ok_or_else(|| Error::Config(format!("color '{s}' must start with '#'")))?;
    if hex.len() != 6 {
        return Err(Error::Config(format!("color '{s}' must be #RRGGBB")));
    }
    let byte = |r: std::ops::Range<usize>| {
        u8::from_str_radix(&hex[r], 16)
            .map_err(|_| Error::Config(format!("color '{s}' has invalid hex digits")))
    };
    Ok([byte(0..2)?, byte(2..4)?, byte(4..6)?])
}
