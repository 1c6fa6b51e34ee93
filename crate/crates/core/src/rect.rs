use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let finite = [x0, x1, y0, y1].iter().all(|v| v.is_finite());
        if !finite || x1 <= x0 || y1 <= y0 {
            return Err(Error::InvalidInput(format!(
                "box [{x0}, {x1}] x [{y0}, {y1}] is empty or not finite"
            )));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    /// The square `[-h, h]²`.
    pub fn centered(half: f64) -> Result<Self> {
        Self::new(-half, half, -half, half)
    }

    /// Parse `"x0,x1,y0,y1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse box {text:?}")))?;
        match parts.as_slice() {
            &[x0, x1, y0, y1] => Self::new(x0, x1, y0, y1),
            _ => Err(Error::InvalidInput(format!(
                "box needs four comma-separated numbers, got {text:?}"
            ))),
        }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn scaled(&self, k: f64) -> Self {
        let (cx, cy) = ((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0);
        let (hx, hy) = (self.width() / 2.0 * k, self.height() / 2.0 * k);
        Rect {
            x0: cx - hx,
            x1: cx + hx,
            y0: cy - hy,
            y1: cy + hy,
        }
    }
}

/// Node `i` of `0..=res` on `[a, b]`, computed so that a symmetric interval
/// gives exactly antisymmetric nodes.
pub(crate) fn grid_node(a: f64, b: f64, i: usize, res: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    mid + half * ((2 * i) as f64 - res as f64) / res as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let r = Rect::parse("-4, 4, -3, 3").unwrap();
        assert_eq!((r.width(), r.height()), (8.0, 6.0));
        assert!(Rect::parse("0,0,0,1").is_err());
        assert!(Rect::parse("1,2,3").is_err());
        assert!(Rect::parse("a,b,c,d").is_err());
    }

    #[test]
    fn symmetric_nodes() {
        for i in 0..=37 {
            assert_eq!(grid_node(-4.0, 4.0, i, 37), -grid_node(-4.0, 4.0, 37 - i, 37));
        }
        assert_eq!(grid_node(-1.0, 3.0, 0, 10), -1.0);
        assert_eq!(grid_node(-1.0, 3.0, 10, 10), 3.0);
    }
}
