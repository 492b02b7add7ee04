//! JSON and fixed-width text forms of matrices.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{Basis, DensVal, LinalgError, Result, SuperVal, C64};
use crate::syntax::parse_type;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct Entry {
    re: f64,
    im: f64,
}

/// `{"basis": "<type>", "rows": [[{"re": .., "im": ..}, ..], ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub basis: String,
    rows: Vec<Vec<Entry>>,
}

impl MatrixJson {
    fn from_matrix(basis: String, mat: &Array2<C64>) -> Self {
        let rows = mat
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|z| Entry { re: z.re, im: z.im }).collect())
            .collect();
        MatrixJson { basis, rows }
    }

    fn to_matrix(&self) -> Result<Array2<C64>> {
        let n = self.rows.len();
        let m = self.rows.first().map_or(0, Vec::len);
        if self.rows.iter().any(|r| r.len() != m) {
            return Err(LinalgError::Malformed("ragged rows".into()));
        }
        Ok(Array2::from_shape_fn((n, m), |(i, j)| {
            let e = self.rows[i][j];
            C64::new(e.re, e.im)
        }))
    }
}

impl DensVal {
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(self.basis.ty().to_string(), &self.mat)
    }

    pub fn from_json(json: &MatrixJson) -> Result<DensVal> {
        let ty = parse_type(&json.basis).map_err(|e| LinalgError::Malformed(format!("basis: {e}")))?;
        let basis = Basis::new(&ty)?;
        let mat = json.to_matrix()?;
        if mat.dim() != (basis.dim(), basis.dim()) {
            return Err(LinalgError::Malformed(format!(
                "expected a {0}×{0} matrix for {1}, found {2}×{3}",
                basis.dim(),
                ty,
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(DensVal::from_matrix(&basis, mat))
    }

    pub fn render(&self) -> String {
        render_matrix(&self.mat)
    }
}

impl SuperVal {
    /// The action matrix; `basis` reads `in => out`.
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(format!("{} => {}", self.input.ty(), self.output.ty()), &self.action)
    }

    pub fn render(&self) -> String {
        render_matrix(&self.action)
    }
}

fn clamp(x: f64) -> f64 {
    if x.abs() < 5e-7 {
        0.0
    } else {
        x
    }
}

/// One row per line, entries as `re+imi` with six decimals. Values that
/// would print as zero are clamped so `-0.000000` never appears.
pub fn render_matrix(mat: &Array2<C64>) -> String {
    let mut out = String::new();
    for row in mat.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| {
                let (re, im) = (clamp(z.re), clamp(z.im));
                if im == 0.0 {
                    format!("{re:.6}")
                } else {
                    format!("{re:.6}{im:+.6}i")
                }
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
