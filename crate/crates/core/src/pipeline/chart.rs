//! Grayscale bar chart of sensitivity/specificity/accuracy per method.

use crate::evaluate::MetricsReport;
use crate::image::GrayImage;

const PLOT_HEIGHT: usize = 100;
const MARGIN: usize = 10;
const BAR_WIDTH: usize = 8;
const BAR_GAP: usize = 3;
const GROUP_GAP: usize = 14;
/// Shades for the sensitivity, specificity, and accuracy bars.
const SHADES: [u16; 3] = [255, 190, 120];

/// Renders one group of three bars per report, scaled so 100% fills the
/// plot height. Undefined metrics draw no bar.
pub fn render_chart(reports: &[MetricsReport]) -> GrayImage {
    let groups = reports.len().max(1);
    let group_width = 3 * BAR_WIDTH + 2 * BAR_GAP;
    let width = 2 * MARGIN + groups * group_width + (groups - 1) * GROUP_GAP;
    let height = 2 * MARGIN + PLOT_HEIGHT + 1;
    let baseline = MARGIN + PLOT_HEIGHT;

    let mut pixels = vec![0u16; width * height];
    for c in 0..width {
        pixels[baseline * width + c] = 90;
    }

    for (g, report) in reports.iter().enumerate() {
        let group_left = MARGIN + g * (group_width + GROUP_GAP);
        let values = [
            report.sensitivity,
            report.specificity,
            Some(report.accuracy),
        ];
        for (b, value) in values.iter().enumerate() {
            let Some(v) = value else { continue };
            let bar_height = (v.clamp(0.0, 100.0) / 100.0 * PLOT_HEIGHT as f64).round() as usize;
            let left = group_left + b * (BAR_WIDTH + BAR_GAP);
            for r in 0..bar_height {
                let row = baseline - 1 - r;
                for c in left..left + BAR_WIDTH {
                    pixels[row * width + c] = SHADES[b];
                }
            }
        }
    }

    GrayImage::new(width, height, 256, pixels).expect("chart dimensions are positive")
}
