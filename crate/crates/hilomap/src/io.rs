//! Point ingestion (CSV, GeoJSON) and raster output (PNG, PAM).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::projection::MAX_LAT_DEG;
use crate::types::{clamp_weight, PointSet, RgbaRaster, WeightedPoint};

/// Supported point input encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointFormat {
    /// Rows of `lon,lat,weight`; a non-numeric first row is treated as a
    /// header.
    Csv,
    /// A FeatureCollection of Point features with a numeric `weight`
    /// property.
    Geojson,
}

impl PointFormat {
    /// Guess from a file extension; anything that is not `.json`/`.geojson`
    /// reads as CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") || ext.eq_ignore_ascii_case("geojson") => {
                PointFormat::Geojson
            }
            _ => PointFormat::Csv,
        }
    }
}

impl std::str::FromStr for PointFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(PointFormat::Csv),
            "geojson" => Ok(PointFormat::Geojson),
            other => Err(Error::Config(format!(
                "unknown input format '{other}', want csv or geojson"
            ))),
        }
    }
}

/// A loaded point set plus ingestion warnings.
#[derive(Debug, Clone)]
pub struct LoadedPoints {
    pub points: PointSet,
    /// Weights that had to be clamped into `[0, 1]`.
    pub clamped: usize,
    /// Features skipped for not being Point geometry.
    pub skipped: usize,
}

/// Load a point file, preserving input order.
pub fn load_points(path: &Path, format: PointFormat) -> Result<LoadedPoints> {
    let file = File::open(path)
        .map_err(|e| Error::Ingest(format!("cannot open {}: {e}", path.display())))?;
    load_points_from_reader(BufReader::new(file), format)
}

/// Reader-based variant of [`load_points`].
pub fn load_points_from_reader(reader: impl BufRead, format: PointFormat) -> Result<LoadedPoints> {
    match format {
        PointFormat::Csv => load_csv(reader),
        PointFormat::Geojson => load_geojson(reader),
    }
}

fn check_lonlat(lon: f64, lat: f64, what: &str) -> Result<()> {
    if !lon.is_finite() || lon.abs() > 180.0 {
        return Err(Error::Ingest(format!("{what}: longitude {lon} outside [-180, 180]")));
    }
    if !lat.is_finite() || lat.abs() > MAX_LAT_DEG {
        return Err(Error::Ingest(format!(
            "{what}: latitude {lat} outside [{}, {}]",
            -MAX_LAT_DEG, MAX_LAT_DEG
        )));
    }
    Ok(())
}

fn load_csv(reader: impl BufRead) -> Result<LoadedPoints> {
    let rows = read_csv_rows(reader, 3)?;
    let mut points = Vec::with_capacity(rows.len());
    let mut clamped = 0;
    for (line, fields) in rows {
        let what = format!("line {line}");
        let lon = fields[0];
        let lat = fields[1];
        check_lonlat(lon, lat, &what)?;
        let weight = clamp_weight(fields[2])
            .map_err(|e| Error::Ingest(format!("{what}: {e}")))?;
        if weight != fields[2] {
            clamped += 1;
        }
        points.push(WeightedPoint::new(lon, lat, weight));
    }
    Ok(LoadedPoints {
        points: PointSet::new(points),
        clamped,
        skipped: 0,
    })
}

/// Parse CSV into rows of at least `min_fields` numbers, tagged with their
/// 1-based line numbers. A first row with any non-numeric field is a header.
fn read_csv_rows(reader: impl BufRead, min_fields: usize) -> Result<Vec<(u64, Vec<f64>)>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut rows = Vec::new();
    for (i, record) in csv_reader.records().enumerate() {
        let record = record.map_err(|e| Error::Ingest(format!("csv parse failure: {e}")))?;
        let line = record.position().map(|p| p.line()).unwrap_or(i as u64 + 1);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Err(_) if rows.is_empty() && i == 0 => continue, // header row
            Err(_) => {
                let bad = record
                    .iter()
                    .find(|f| f.parse::<f64>().is_err())
                    .unwrap_or_default();
                return Err(Error::Ingest(format!("line {line}: invalid number '{bad}'")));
            }
            Ok(fields) if fields.len() < min_fields => {
                return Err(Error::Ingest(format!(
                    "line {line}: expected at least {min_fields} columns, got {}",
                    fields.len()
                )));
            }
            Ok(fields) => rows.push((line, fields)),
        }
    }
    Ok(rows)
}

fn load_geojson(mut reader: impl BufRead) -> Result<LoadedPoints> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| Error::Ingest(format!("cannot read geojson: {e}")))?;
    let root: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Ingest(format!("invalid geojson: {e}")))?;

    let features = root
        .get("features")
        .and_then(|f| f.as_array())
        .ok_or_else(|| Error::Ingest("geojson must be a FeatureCollection with features".into()))?;

    let mut points = Vec::new();
    let mut clamped = 0;
    let mut skipped = 0;
    for (i, feature) in features.iter().enumerate() {
        let what = format!("feature {}", i + 1);
        let geometry = feature.get("geometry");
        let is_point = geometry
            .and_then(|g| g.get("type"))
            .and_then(|t| t.as_str())
            .map(|t| t == "Point")
            .unwrap_or(false);
        if !is_point {
            skipped += 1;
            continue;
        }
        let coords = geometry
            .and_then(|g| g.get("coordinates"))
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Ingest(format!("{what}: Point without coordinates")))?;
        if coords.len() < 2 {
            return Err(Error::Ingest(format!("{what}: coordinates need lon and lat")));
        }
        let lon = coords[0]
            .as_f64()
            .ok_or_else(|| Error::Ingest(format!("{what}: non-numeric longitude")))?;
        let lat = coords[1]
            .as_f64()
            .ok_or_else(|| Error::Ingest(format!("{what}: non-numeric latitude")))?;
        check_lonlat(lon, lat, &what)?;
        let raw = feature
            .get("properties")
            .and_then(|p| p.get("weight"))
            .and_then(|w| w.as_f64())
            .ok_or_else(|| Error::Ingest(format!("{what}: missing numeric 'weight' property")))?;
        let weight = clamp_weight(raw).map_err(|e| Error::Ingest(format!("{what}: {e}")))?;
        if weight != raw {
            clamped += 1;
        }
        points.push(WeightedPoint::new(lon, lat, weight));
    }
    Ok(LoadedPoints {
        points: PointSet::new(points),
        clamped,
        skipped,
    })
}

/// Load bare locations (first two CSV columns as lon, lat) for the
/// synthetic data generator. Extra columns are ignored.
pub fn load_base_locations(path: &Path) -> Result<Vec<(f64, f64)>> {
    let file = File::open(path)
        .map_err(|e| Error::Ingest(format!("cannot open {}: {e}", path.display())))?;
    let rows = read_csv_rows(BufReader::new(file), 2)?;
    rows.into_iter()
        .map(|(line, fields)| {
            check_lonlat(fields[0], fields[1], &format!("line {line}"))?;
            Ok((fields[0], fields[1]))
        })
        .collect()
}

/// Write a point set as `lon,lat,weight` CSV with a header. Values use the
/// shortest round-trip float representation, so a load of the written file
/// reproduces the set exactly.
pub fn write_points_csv(points: &PointSet, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    write_points_csv_to(points, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Writer-based variant of [`write_points_csv`].
pub fn write_points_csv_to(points: &PointSet, out: &mut impl Write) -> Result<()> {
    writeln!(out, "lon,lat,weight")?;
    for p in points.iter() {
        writeln!(out, "{},{},{}", p.lon, p.lat, p.weight)?;
    }
    Ok(())
}

/// Supported raster output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    /// 8-bit RGBA, non-interlaced.
    Png,
    /// P7 PAM, DEPTH 4, MAXVAL 255, RGB_ALPHA; fixed byte layout.
    Pam,
}

impl RasterFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("png") => Ok(RasterFormat::Png),
            Some(ext) if ext.eq_ignore_ascii_case("pam") => Ok(RasterFormat::Pam),
            _ => Err(Error::Config(format!(
                "cannot infer raster format from '{}', want .png or .pam",
                path.display()
            ))),
        }
    }
}

/// Encode the raster as a P7 PAM file.
pub fn encode_pam(raster: &RgbaRaster) -> Vec<u8> {
    let header = format!(
        "P7\nWIDTH {}\nHEIGHT {}\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n",
        raster.width(),
        raster.height()
    );
    let mut out = header.into_bytes();
    out.extend_from_slice(raster.data());
    out
}

/// Encode the raster as a non-interlaced 8-bit RGBA PNG.
pub fn encode_png(raster: &RgbaRaster) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, raster.width(), raster.height());
        encoder.set_color(png::ColorType::Rgba);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Encode(e.to_string()))?;
        writer
            .write_image_data(raster.data())
            .map_err(|e| Error::Encode(e.to_string()))?;
    }
    Ok(out)
}

/// Write the raster to disk in the requested format.
pub fn write_raster(raster: &RgbaRaster, path: &Path, format: RasterFormat) -> Result<()> {
    let bytes = match format {
        RasterFormat::Png => encode_png(raster)?,
        RasterFormat::Pam => encode_pam(raster),
    };
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn load_csv_str(s: &str) -> Result<LoadedPoints> {
        load_points_from_reader(Cursor::new(s.as_bytes()), PointFormat::Csv)
    }

    #[test]
    fn csv_single_bare_row() {
        let loaded = load_csv_str("0,0,0.5\n").unwrap();
        assert_eq!(loaded.points.as_slice(), &[WeightedPoint::new(0.0, 0.0, 0.5)]);
        assert_eq!(loaded.clamped, 0);
    }

    #[test]
    fn csv_header_detected_and_weight_clamped() {
        let loaded = load_csv_str("lon,lat,weight\n10,20,1.5\n").unwrap();
        assert_eq!(loaded.points.len(), 1);
        assert_eq!(loaded.points.as_slice()[0].weight, 1.0);
        assert_eq!(loaded.clamped, 1);
    }

    #[test]
    fn csv_malformed_row_reports_line() {
        let err = load_csv_str("lon,lat,weight\n1,2,0.5\n3,oops,0.5\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let err = load_csv_str("1,2\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn csv_rejects_out_of_range_coordinates() {
        let err = load_csv_str("0,89.9,0.5\n").unwrap_err();
        assert!(err.to_string().contains("latitude"), "{err}");
        let err = load_csv_str("190,0,0.5\n").unwrap_err();
        assert!(err.to_string().contains("longitude"), "{err}");
    }

    #[test]
    fn csv_rejects_nan_weight() {
        let err = load_csv_str("0,0,NaN\n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
    }

    #[test]
    fn csv_preserves_order() {
        let loaded = load_csv_str("1,1,0.1\n2,2,0.2\n3,3,0.3\n").unwrap();
        let weights: Vec<f64> = loaded.points.iter().map(|p| p.weight).collect();
        assert_eq!(weights, vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn geojson_two_points_in_order() {
        let text = r#"{
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "geometry": {"type": "Point", "coordinates": [10.0, 20.0]}, "properties": {"weight": 0.25}},
                {"type": "Feature", "geometry": {"type": "Point", "coordinates": [-5.0, 4.0]}, "properties": {"weight": 0.75}}
            ]
        }"#;
        let loaded = load_points_from_reader(Cursor::new(text.as_bytes()), PointFormat::Geojson).unwrap();
        assert_eq!(loaded.points.len(), 2);
        assert_eq!(loaded.points.as_slice()[0].lon, 10.0);
        assert_eq!(loaded.points.as_slice()[1].weight, 0.75);
        assert_eq!(loaded.skipped, 0);
    }

    #[test]
    fn geojson_skips_non_point_geometry() {
        let text = r#"{
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]}, "properties": {"weight": 0.5}},
                {"type": "Feature", "geometry": {"type": "Point", "coordinates": [1.0, 1.0]}, "properties": {"weight": 0.5}}
            ]
        }"#;
        let loaded = load_points_from_reader(Cursor::new(text.as_bytes()), PointFormat::Geojson).unwrap();
        assert_eq!(loaded.points.len(), 1);
        assert_eq!(loaded.skipped, 1);
    }

    #[test]
    fn geojson_point_without_weight_is_an_error() {
        let text = r#"{
            "type": "FeatureCollection",
            "features": [
                {"type": "Feature", "geometry": {"type": "Point", "coordinates": [1.0, 1.0]}, "properties": {}}
            ]
        }"#;
        let err =
            load_points_from_reader(Cursor::new(text.as_bytes()), PointFormat::Geojson).unwrap_err();
        assert!(err.to_string().contains("feature 1"), "{err}");
    }

    #[test]
    fn pam_golden_bytes() {
        let transparent = RgbaRaster::new(1, 1);
        assert_eq!(
            encode_pam(&transparent),
            b"P7\nWIDTH 1\nHEIGHT 1\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n\x00\x00\x00\x00"
        );
        let mut red = RgbaRaster::new(1, 1);
        red.set_pixel(0, 0, [255, 0, 0, 255]);
        assert_eq!(
            encode_pam(&red),
            b"P7\nWIDTH 1\nHEIGHT 1\nDEPTH 4\nMAXVAL 255\nTUPLTYPE RGB_ALPHA\nENDHDR\n\xFF\x00\x00\xFF"
        );
    }

    #[test]
    fn encoders_are_deterministic() {
        let mut raster = RgbaRaster::new(3, 2);
        raster.set_pixel(1, 1, [10, 20, 30, 200]);
        assert_eq!(encode_pam(&raster), encode_pam(&raster));
        assert_eq!(encode_png(&raster).unwrap(), encode_png(&raster).unwrap());
    }

    #[test]
    fn png_has_magic_and_decodes_dimensions() {
        let raster = RgbaRaster::new(4, 3);
        let bytes = encode_png(&raster).unwrap();
        assert_eq!(&bytes[..8], &[0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A]);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let points = PointSet::new(vec![
            WeightedPoint::new(-122.419416, 37.774929, 0.30000000000000004),
            WeightedPoint::new(0.1, -0.2, 1.0),
            WeightedPoint::new(179.99999, -85.0, 0.0),
        ]);
        let mut buf = Vec::new();
        write_points_csv_to(&points, &mut buf).unwrap();
        let loaded = load_points_from_reader(Cursor::new(&buf), PointFormat::Csv).unwrap();
        assert_eq!(loaded.points, points);
        assert_eq!(loaded.clamped, 0);
    }

    #[test]
    fn format_inference() {
        assert_eq!(PointFormat::from_path(Path::new("a.geojson")), PointFormat::Geojson);
        assert_eq!(PointFormat::from_path(Path::new("a.csv")), PointFormat::Csv);
        assert_eq!(RasterFormat::from_path(Path::new("a.png")).unwrap(), RasterFormat::Png);
        assert_eq!(RasterFormat::from_path(Path::new("a.PAM")).unwrap(), RasterFormat::Pam);
        assert!(RasterFormat::from_path(Path::new("a.bmp")).is_err());
    }
}
