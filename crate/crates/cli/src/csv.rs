use crate::error::CliError;
use jumpscope::SampledGridSource;
use std::path::Path;

/// Abscissa tolerance for ingested grids, relative to the unit domain.
const GRID_TOL: f64 = 1e-9;

/// Reads a two-column `x,value` file (optional header, LF or CRLF) into a
/// sampled source. The abscissas must be uniform and ascending from 0 to 1;
/// they are snapped to the exact `k/K` grid afterwards, so quantization is
/// absorbed into the effective noise bound by the source itself.
pub fn ingest_csv(path: &Path, delta_raw: f64, m1: f64) -> Result<SampledGridSource, CliError> {
    let content = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;

    let mut rows: Vec<(usize, f64, f64)> = Vec::new();
    let mut saw_data = false;
    for (idx, raw) in content.lines().enumerate() {
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("expected two columns, got {}", fields.len()),
            });
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(x), Ok(v)) => {
                rows.push((idx + 1, x, v));
                saw_data = true;
            }
            _ if !saw_data => {} // header line
            (Err(_), _) => {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("cannot parse abscissa {:?}", fields[0]),
                });
            }
            (_, Err(_)) => {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: format!("cannot parse value {:?}", fields[1]),
                });
            }
        }
    }
    if rows.len() < 2 {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            line: content.lines().count(),
            message: "need at least two data rows spanning [0,1]".into(),
        });
    }

    let n = rows.len() - 1;
    if rows[0].1.abs() > GRID_TOL {
        return Err(CliError::DomainNotUnit {
            path: path.to_path_buf(),
            message: format!("first abscissa is {}", rows[0].1),
        });
    }
    if (rows[n].1 - 1.0).abs() > GRID_TOL {
        return Err(CliError::DomainNotUnit {
            path: path.to_path_buf(),
            message: format!("last abscissa is {}", rows[n].1),
        });
    }
    let dx = 1.0 / n as f64;
    for (k, &(line, x, _)) in rows.iter().enumerate() {
        let expect = k as f64 * dx;
        if (x - expect).abs() > GRID_TOL {
            return Err(CliError::NonUniformGrid {
                path: path.to_path_buf(),
                line,
                message: format!("abscissa {x} deviates from the uniform value {expect}"),
            });
        }
    }
    let values: Vec<f64> = rows.iter().map(|&(_, _, v)| v).collect();
    SampledGridSource::new(values, delta_raw, m1).map_err(|e| CliError::Domain(e.to_string()))
}
