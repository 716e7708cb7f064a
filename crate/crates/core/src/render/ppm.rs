use std::io::{self, Write};

use super::{Palette, PixelState, RasterImage};

const RED: [u8; 3] = [255, 0, 0];
const WHITE: [u8; 3] = [255, 255, 255];
const SHADE_FLOOR: f64 = 64.0;

/// Colour of one pixel. `max_iter` scales the shaded ramp.
pub fn pixel_rgb(state: PixelState, palette: Palette, max_iter: usize) -> [u8; 3] {
    match (state, palette) {
        (PixelState::Fatou(_), Palette::RedWhite) => RED,
        (PixelState::Fatou(step), Palette::IterationShaded) => {
            let t = (step as f64 / max_iter.max(1) as f64).min(1.0);
            let r = (255.0 - t * (255.0 - SHADE_FLOOR)).round() as u8;
            [r, 0, 0]
        }
        (PixelState::Julia | PixelState::Undecided(_), _) => WHITE,
    }
}

fn max_step(img: &RasterImage) -> usize {
    img.outcomes
        .iter()
        .map(|o| match o.state {
            PixelState::Fatou(_) => o.iterations,
            PixelState::Undecided(n) => n,
            PixelState::Julia => o.iterations,
        })
        .max()
        .unwrap_or(1)
}

/// Binary P6 image, maxval 255, optionally with one `#` comment line.
pub fn write_ppm<W: Write>(
    img: &RasterImage,
    palette: Palette,
    comment: Option<&str>,
    mut out: W,
) -> io::Result<()> {
    writeln!(out, "P6")?;
    if let Some(c) = comment {
        writeln!(out, "# {}", c.replace('\n', " "))?;
    }
    write!(out, "{} {}\n255\n", img.width, img.height)?;
    let scale = max_step(img);
    let mut row = Vec::with_capacity(img.width * 3);
    for r in 0..img.height {
        row.clear();
        for o in img.row(r) {
            row.extend_from_slice(&pixel_rgb(o.state, palette, scale));
        }
        out.write_all(&row)?;
    }
    Ok(())
}

pub fn encode_ppm(img: &RasterImage, palette: Palette) -> Vec<u8> {
    let mut buf = Vec::with_capacity(32 + img.outcomes.len() * 3);
    write_ppm(img, palette, None, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::PixelOutcome;

    fn image(states: &[PixelState], width: usize) -> RasterImage {
        RasterImage {
            width,
            height: states.len() / width,
            outcomes: states
                .iter()
                .map(|&state| PixelOutcome {
                    state,
                    iterations: match state {
                        PixelState::Fatou(i) | PixelState::Undecided(i) => i,
                        PixelState::Julia => 0,
                    },
                })
                .collect(),
        }
    }

    #[test]
    fn single_pixels() {
        let julia = encode_ppm(&image(&[PixelState::Julia], 1), Palette::RedWhite);
        assert_eq!(julia, b"P6\n1 1\n255\n\xff\xff\xff");
        let fatou = encode_ppm(&image(&[PixelState::Fatou(3)], 1), Palette::RedWhite);
        assert_eq!(&fatou[fatou.len() - 3..], &[0xff, 0, 0]);
        let undecided = encode_ppm(&image(&[PixelState::Undecided(250)], 1), Palette::RedWhite);
        assert_eq!(&undecided[undecided.len() - 3..], &[0xff, 0xff, 0xff]);
    }

    #[test]
    fn round_trip_through_reference_decoder() {
        let img = image(&[PixelState::Fatou(2), PixelState::Julia], 2);
        let bytes = encode_ppm(&img, Palette::RedWhite);
        let decoded = image::load_from_memory_with_format(&bytes, image::ImageFormat::Pnm)
            .unwrap()
            .to_rgb8();
        assert_eq!(decoded.dimensions(), (2, 1));
        assert_eq!(decoded.get_pixel(0, 0).0, RED);
        assert_eq!(decoded.get_pixel(1, 0).0, WHITE);
    }

    #[test]
    fn comment_line_is_readable() {
        let img = image(
            &[
                PixelState::Julia,
                PixelState::Fatou(1),
                PixelState::Fatou(4),
                PixelState::Julia,
            ],
            2,
        );
        let mut buf = Vec::new();
        write_ppm(
            &img,
            Palette::IterationShaded,
            Some("merodyn julia lambda=0.9"),
            &mut buf,
        )
        .unwrap();
        assert!(buf.starts_with(b"P6\n# merodyn julia lambda=0.9\n2 2\n255\n"));
        let decoded = image::load_from_memory_with_format(&buf, image::ImageFormat::Pnm)
            .unwrap()
            .to_rgb8();
        assert_eq!(decoded.dimensions(), (2, 2));
        assert_eq!(decoded.get_pixel(0, 0).0, WHITE);
    }

    #[test]
    fn shaded_ramp_is_monotone() {
        let mut last = 256u16;
        for step in 0..=250 {
            let [r, g, b] = pixel_rgb(PixelState::Fatou(step), Palette::IterationShaded, 250);
            assert_eq!((g, b), (0, 0));
            assert!((r as u16) <= last);
            last = r as u16;
        }
        assert_eq!(
            pixel_rgb(PixelState::Fatou(0), Palette::IterationShaded, 250)[0],
            255
        );
        assert_eq!(
            pixel_rgb(PixelState::Fatou(250), Palette::IterationShaded, 250)[0],
            64
        );
    }
}
