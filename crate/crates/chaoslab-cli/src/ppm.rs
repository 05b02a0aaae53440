//! Binary PPM (P6, 8-bit) raster output: white background, black points,
//! deterministic pixel mapping.

use std::io::Write;

use chaoslab::ifs::{ExtComplex, MetricPoint};

pub struct Raster {
    width: u32,
    height: u32,
    viewport: [f64; 4], // xmin, xmax, ymin, ymax
    set: Vec<bool>,
}

impl Raster {
    pub fn new(width: u32, height: u32, viewport: [f64; 4]) -> Self {
        Raster {
            width,
            height,
            viewport,
            set: vec![false; (width as usize) * (height as usize)],
        }
    }

    /// Plots a point: affine scaling into pixel space with y inverted.
    /// Points outside the viewport (including its far boundary, which maps
    /// to the pixel just past the edge) are clipped.
    pub fn plot_xy(&mut self, x: f64, y: f64) {
        let [xmin, xmax, ymin, ymax] = self.viewport;
        let px = ((x - xmin) / (xmax - xmin) * self.width as f64).floor();
        let py = ((ymax - y) / (ymax - ymin) * self.height as f64).floor();
        if px >= 0.0 && px < self.width as f64 && py >= 0.0 && py < self.height as f64 {
            self.set[py as usize * self.width as usize + px as usize] = true;
        }
    }

    /// Plots a metric point. Sphere points are drawn by their unit-sphere
    /// embedding seen from above: (s1, s2), both hemispheres overlaid, the
    /// point at infinity at the origin-adjacent north pole (0, 0).
    pub fn plot(&mut self, p: MetricPoint) {
        match p {
            MetricPoint::Planar { x, y } => self.plot_xy(x, y),
            MetricPoint::Sphere(z) => {
                let (s1, s2) = match z {
                    ExtComplex::Infinity => (0.0, 0.0),
                    ExtComplex::Finite(z) => {
                        let n = z.norm_sqr();
                        (2.0 * z.re / (1.0 + n), 2.0 * z.im / (1.0 + n))
                    }
                };
                self.plot_xy(s1, s2);
            }
        }
    }

    #[cfg(test)]
    pub fn black_pixels(&self) -> usize {
        self.set.iter().filter(|&&b| b).count()
    }

    /// Serializes as binary PPM: `P6\n<w> <h>\n255\n` followed by RGB rows.
    pub fn write_ppm(&self, mut out: impl Write) -> std::io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let mut row = Vec::with_capacity(self.width as usize * 3);
        for y in 0..self.height as usize {
            row.clear();
            for x in 0..self.width as usize {
                let v = if self.set[y * self.width as usize + x] {
                    0u8
                } else {
                    255u8
                };
                row.extend_from_slice(&[v, v, v]);
            }
            out.write_all(&row)?;
        }
        Ok(())
    }
}
