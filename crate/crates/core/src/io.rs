//! File formats: point-set CSV, tabulated-kernel CSV, trace CSV, solution
//! CSV, and JSON result documents.
//!
//! Numeric CSV is parsed by hand so that errors name the exact row and
//! column. Floats are written with Rust's shortest round-trip formatting,
//! which is byte-deterministic for identical inputs.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use crate::delta::PointSet;
use crate::error::{Error, Result};
use crate::integral::IntegralSolution;
use crate::norm::Norm;
use crate::solvers::{DecreasingResult, FixedPointResult, IterationTrace, Termination};

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_string(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_cell(path: &Path, row: usize, column: usize, cell: &str) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|e| Error::CsvParse {
            path: path.display().to_string(),
            row,
            column,
            message: format!("{e}: {cell:?}"),
        })
}

/// Read a point set: one point per row, coordinates as comma-separated
/// columns. Rows must agree in width.
pub fn read_point_set_csv(path: &Path, norm: Norm) -> Result<PointSet> {
    let text = read_to_string(path)?;
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (r, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut point = Vec::new();
        for (c, cell) in line.split(',').enumerate() {
            point.push(parse_cell(path, r + 1, c + 1, cell)?);
        }
        if let Some(w) = width {
            if point.len() != w {
                return Err(Error::CsvParse {
                    path: path.display().to_string(),
                    row: r + 1,
                    column: point.len(),
                    message: format!("expected {w} columns, found {}", point.len()),
                });
            }
        } else {
            width = Some(point.len());
        }
        points.push(point);
    }
    PointSet::new(points, norm)
}

pub fn write_point_set_csv(path: &Path, set: &PointSet) -> Result<()> {
    let mut out = String::new();
    for p in set.points() {
        let row: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    write_string(path, &out)
}

/// A tabulated kernel: values\[i\]\[j\] = R(x_grid\[i\], y_grid\[j\]).
#[derive(Debug, Clone)]
pub struct KernelTable {
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// Read a tabulated kernel: header row carries the y-grid (first cell
/// ignored), each body row starts with its x value.
pub fn read_kernel_csv(path: &Path) -> Result<KernelTable> {
    let text = read_to_string(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hr, header) = lines.next().ok_or(Error::CsvParse {
        path: path.display().to_string(),
        row: 1,
        column: 1,
        message: "empty kernel file".into(),
    })?;
    let mut y_grid = Vec::new();
    for (c, cell) in header.split(',').enumerate().skip(1) {
        y_grid.push(parse_cell(path, hr + 1, c + 1, cell)?);
    }
    if y_grid.len() < 2 {
        return Err(Error::CsvParse {
            path: path.display().to_string(),
            row: hr + 1,
            column: 1,
            message: "kernel header needs at least 2 y values".into(),
        });
    }
    let mut x_grid = Vec::new();
    let mut values = Vec::new();
    for (r, line) in lines {
        let mut cells = line.split(',');
        let x_cell = cells.next().unwrap_or("");
        x_grid.push(parse_cell(path, r + 1, 1, x_cell)?);
        let mut row = Vec::new();
        for (c, cell) in cells.enumerate() {
            row.push(parse_cell(path, r + 1, c + 2, cell)?);
        }
        if row.len() != y_grid.len() {
            return Err(Error::CsvParse {
                path: path.display().to_string(),
                row: r + 1,
                column: row.len() + 1,
                message: format!("expected {} value columns, found {}", y_grid.len(), row.len()),
            });
        }
        values.push(row);
    }
    if x_grid.len() < 2 {
        return Err(Error::CsvParse {
            path: path.display().to_string(),
            row: 1,
            column: 1,
            message: "tabulated kernel needs at least 2 x rows".into(),
        });
    }
    Ok(KernelTable {
        x_grid,
        y_grid,
        values,
    })
}

/// Bilinear interpolation over a tabulated kernel (clamped at the table's
/// edges). Grids must be strictly increasing.
pub fn interpolate_kernel(
    x_grid: &[f64],
    y_grid: &[f64],
    values: &[Vec<f64>],
) -> impl Fn(f64, f64) -> f64 + Send + Sync {
    let xs = x_grid.to_vec();
    let ys = y_grid.to_vec();
    let vals = values.to_vec();
    move |x: f64, y: f64| {
        let (i, tx) = bracket(&xs, x);
        let (j, ty) = bracket(&ys, y);
        let v00 = vals[i][j];
        let v01 = vals[i][j + 1];
        let v10 = vals[i + 1][j];
        let v11 = vals[i + 1][j + 1];
        (1.0 - tx) * ((1.0 - ty) * v00 + ty * v01) + tx * ((1.0 - ty) * v10 + ty * v11)
    }
}

fn bracket(grid: &[f64], v: f64) -> (usize, f64) {
    let n = grid.len();
    if v <= grid[0] {
        return (0, 0.0);
    }
    if v >= grid[n - 1] {
        return (n - 2, 1.0);
    }
    let mut i = 0;
    while i + 2 < n && grid[i + 1] <= v {
        i += 1;
    }
    let span = grid[i + 1] - grid[i];
    let t = if span > 0.0 { (v - grid[i]) / span } else { 0.0 };
    (i, t)
}

fn termination_str(t: Termination) -> &'static str {
    match t {
        Termination::Converged => "converged",
        Termination::MaxIter => "max_iter",
        Termination::OrderViolation => "order_violation",
        Termination::H1Violation => "h1_violation",
    }
}

/// Trace CSV: iteration, coordinates, residual, order certificate, sandwich
/// width. Residual/certificate cells are blank on the start row; width cells
/// are blank except where a pair completes.
pub fn trace_to_csv(trace: &IterationTrace) -> String {
    let dim = trace.iterates.first().map(|p| p.len()).unwrap_or(0);
    let mut out = String::new();
    let coords: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    let _ = writeln!(
        out,
        "iteration,{},residual,order_certified,sandwich_width",
        coords.join(",")
    );
    for (n, point) in trace.iterates.iter().enumerate() {
        let coord_cells: Vec<String> = point.iter().map(|v| format!("{v}")).collect();
        let residual = if n == 0 {
            String::new()
        } else {
            format!("{}", trace.residuals[n - 1])
        };
        let certified = if n == 0 {
            String::new()
        } else {
            format!("{}", trace.order_certified[n - 1])
        };
        let width = match (&trace.sandwich_widths, n % 2) {
            (Some(widths), 1) if n / 2 < widths.len() => format!("{}", widths[n / 2]),
            _ => String::new(),
        };
        let _ = writeln!(
            out,
            "{n},{},{residual},{certified},{width}",
            coord_cells.join(",")
        );
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &IterationTrace) -> Result<()> {
    write_string(path, &trace_to_csv(trace))
}

pub fn write_fixed_point_json(path: &Path, result: &FixedPointResult) -> Result<()> {
    let doc = json!({
        "point": result.point,
        "residual": result.residual,
        "terminated_by": termination_str(result.trace.terminated_by),
        "iterations": result.trace.steps(),
        "above_start": result.above_start,
        "tol": result.trace.tol,
    });
    write_string(path, &format!("{:#}\n", doc))
}

pub fn write_decreasing_json(path: &Path, result: &DecreasingResult) -> Result<()> {
    let doc = json!({
        "point": result.point,
        "even_limit": result.even_limit,
        "odd_limit": result.odd_limit,
        "h1_gap": result.h1_gap,
        "residual": result.h1_gap,
        "terminated_by": termination_str(result.trace.terminated_by),
        "iterations": result.trace.steps(),
        "tol": result.trace.tol,
    });
    write_string(path, &format!("{:#}\n", doc))
}

/// Solution CSV: x, psi, Psi, g per grid node.
pub fn solution_to_csv(solution: &IntegralSolution) -> String {
    let mut out = String::from("x,psi,Psi,g\n");
    for i in 0..solution.psi.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            solution.psi.node(i),
            solution.psi.values()[i],
            solution.big_psi.values()[i],
            solution.g.values()[i]
        );
    }
    out
}

pub fn write_solution_csv(path: &Path, solution: &IntegralSolution) -> Result<()> {
    write_string(path, &solution_to_csv(solution))
}

pub fn write_solution_summary_json(path: &Path, solution: &IntegralSolution) -> Result<()> {
    let doc = json!({
        "residual": solution.residual,
        "analytic_gap": solution.analytic_gap,
        "iterations": solution.iterations,
        "grid_size": solution.psi.len(),
        "terminated_by": termination_str(solution.engine.trace.terminated_by),
        "h1_gap": solution.engine.h1_gap,
    });
    write_string(path, &format!("{:#}\n", doc))
}

pub fn write_json_value(path: &Path, value: &serde_json::Value) -> Result<()> {
    write_string(path, &format!("{:#}\n", value))
}
