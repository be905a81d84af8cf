//! Model and segment point files: whitespace/comma separated `x y z` text,
//! or PLY (ASCII or binary) with a `vertex` element holding `x`, `y`, `z`.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{ObjectModel, PointCloud, Vec3};

const MODEL_EXTENSIONS: &[&str] = &["ply", "xyz", "txt", "pts", "csv"];

fn model_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Model {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

/// Parses `x y z` rows; extra columns are ignored, `#` starts a comment.
pub fn parse_xyz(text: &str, path: &Path) -> Result<Vec<Vec3>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty());
        let mut v = [0.0; 3];
        for slot in &mut v {
            let tok = it.next().ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: k + 1,
                msg: "expected 3 coordinates".into(),
            })?;
            *slot = tok.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: k + 1,
                msg: format!("not a number: {tok:?}"),
            })?;
        }
        out.push(Vec3::new(v[0], v[1], v[2]));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Encoding {
    Ascii,
    Little,
    Big,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn read(self, b: &[u8], enc: Encoding) -> f64 {
        macro_rules! num {
            ($t:ty, $n:expr) => {{
                let a: [u8; $n] = b[..$n].try_into().unwrap();
                (if enc == Encoding::Big {
                    <$t>::from_be_bytes(a)
                } else {
                    <$t>::from_le_bytes(a)
                }) as f64
            }};
        }
        match self {
            Scalar::I8 => b[0] as i8 as f64,
            Scalar::U8 => b[0] as f64,
            Scalar::I16 => num!(i16, 2),
            Scalar::U16 => num!(u16, 2),
            Scalar::I32 => num!(i32, 4),
            Scalar::U32 => num!(u32, 4),
            Scalar::F32 => num!(f32, 4),
            Scalar::F64 => num!(f64, 8),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar(Scalar, String),
    List(Scalar, Scalar),
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    props: Vec<Property>,
}

/// Parses the vertex positions of a PLY file.
pub fn parse_ply(bytes: &[u8], path: &Path) -> Result<Vec<Vec3>> {
    let err = |msg: &str| model_err(path, msg);
    let end = find_header_end(bytes).ok_or_else(|| err("missing end_header"))?;
    let header = std::str::from_utf8(&bytes[..end.0]).map_err(|_| err("header is not text"))?;
    let mut lines = header.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(err("missing ply signature"));
    }
    let mut encoding = None;
    let mut elements: Vec<Element> = Vec::new();
    for line in lines {
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok.as_slice() {
            ["format", f, _] => {
                encoding = Some(match *f {
                    "ascii" => Encoding::Ascii,
                    "binary_little_endian" => Encoding::Little,
                    "binary_big_endian" => Encoding::Big,
                    _ => return Err(err("unknown ply format")),
                })
            }
            ["element", name, count] => elements.push(Element {
                name: name.to_string(),
                count: count.parse().map_err(|_| err("bad element count"))?,
                props: Vec::new(),
            }),
            ["property", "list", c, i, _] => {
                let (c, i) = Scalar::parse(c).zip(Scalar::parse(i)).ok_or_else(|| err("bad list type"))?;
                elements
                    .last_mut()
                    .ok_or_else(|| err("property before element"))?
                    .props
                    .push(Property::List(c, i));
            }
            ["property", t, name] => {
                let t = Scalar::parse(t).ok_or_else(|| err("bad property type"))?;
                elements
                    .last_mut()
                    .ok_or_else(|| err("property before element"))?
                    .props
                    .push(Property::Scalar(t, name.to_string()));
            }
            _ => {}
        }
    }
    let encoding = encoding.ok_or_else(|| err("missing format line"))?;
    let vi = elements
        .iter()
        .position(|e| e.name == "vertex")
        .ok_or_else(|| err("no vertex element"))?;
    let slot = |axis: &str| {
        elements[vi]
            .props
            .iter()
            .position(|p| matches!(p, Property::Scalar(_, n) if n == axis))
            .ok_or_else(|| err("vertex element lacks x/y/z"))
    };
    let axes = [slot("x")?, slot("y")?, slot("z")?];
    let body = &bytes[end.1..];
    match encoding {
        Encoding::Ascii => ascii_vertices(body, &elements, vi, axes, path),
        enc => binary_vertices(body, &elements, vi, axes, enc, path),
    }
}

/// Byte ranges of the header text and the start of the body.
fn find_header_end(bytes: &[u8]) -> Option<(usize, usize)> {
    let key = b"end_header";
    let pos = bytes.windows(key.len()).position(|w| w == key)?;
    let mut body = pos + key.len();
    if bytes.get(body) == Some(&b'\r') {
        body += 1;
    }
    if bytes.get(body) == Some(&b'\n') {
        body += 1;
    }
    Some((pos, body))
}

fn ascii_vertices(body: &[u8], elements: &[Element], vi: usize, axes: [usize; 3], path: &Path) -> Result<Vec<Vec3>> {
    let text = std::str::from_utf8(body).map_err(|_| model_err(path, "body is not text"))?;
    let skip: usize = elements[..vi].iter().map(|e| e.count).sum();
    let mut rows = text.lines().filter(|l| !l.trim().is_empty()).skip(skip);
    let mut out = Vec::with_capacity(elements[vi].count);
    for k in 0..elements[vi].count {
        let row = rows
            .next()
            .ok_or_else(|| model_err(path, format!("expected {} vertices, found {k}", elements[vi].count)))?;
        let vals: Vec<&str> = row.split_whitespace().collect();
        let mut v = [0.0; 3];
        for (d, &a) in axes.iter().enumerate() {
            v[d] = vals
                .get(a)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| model_err(path, format!("bad vertex row {k}")))?;
        }
        out.push(Vec3::new(v[0], v[1], v[2]));
    }
    Ok(out)
}

fn binary_vertices(
    body: &[u8],
    elements: &[Element],
    vi: usize,
    axes: [usize; 3],
    enc: Encoding,
    path: &Path,
) -> Result<Vec<Vec3>> {
    let short = || model_err(path, "truncated binary body");
    let mut pos = 0usize;
    let skip_record = |props: &[Property], pos: &mut usize| -> Result<()> {
        for p in props {
            match p {
                Property::Scalar(t, _) => *pos += t.size(),
                Property::List(c, i) => {
                    let n = c.read(body.get(*pos..*pos + c.size()).ok_or_else(short)?, enc) as usize;
                    *pos += c.size() + n * i.size();
                }
            }
        }
        Ok(())
    };
    for e in &elements[..vi] {
        for _ in 0..e.count {
            skip_record(&e.props, &mut pos)?;
        }
    }
    let v = &elements[vi];
    let mut out = Vec::with_capacity(v.count);
    for _ in 0..v.count {
        let mut coords = [0.0; 3];
        for (k, p) in v.props.iter().enumerate() {
            match p {
                Property::Scalar(t, _) => {
                    let b = body.get(pos..pos + t.size()).ok_or_else(short)?;
                    if let Some(d) = axes.iter().position(|&a| a == k) {
                        coords[d] = t.read(b, enc);
                    }
                    pos += t.size();
                }
                Property::List(..) => skip_record(std::slice::from_ref(p), &mut pos)?,
            }
        }
        if pos > body.len() {
            return Err(short());
        }
        out.push(Vec3::new(coords[0], coords[1], coords[2]));
    }
    Ok(out)
}

/// Reads a point file, choosing the parser by extension (`.ply` or text).
pub fn load_cloud(path: &Path) -> Result<PointCloud> {
    let bytes = super::read_file(path)?;
    let is_ply = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("ply"))
        || bytes.starts_with(b"ply");
    let points = if is_ply {
        parse_ply(&bytes, path)?
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|_| model_err(path, "not a text file"))?;
        parse_xyz(text, path)?
    };
    if points.is_empty() {
        return Err(model_err(path, "no vertices"));
    }
    if let Some(i) = points.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(model_err(path, format!("non-finite coordinate at vertex {i}")));
    }
    Ok(PointCloud::from(points))
}

/// Loads a model and rescales it to meters by `scale`.
pub fn load_model(path: &Path, class_id: u16, scale: f64) -> Result<ObjectModel> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidConfig(format!("scale must be positive, got {scale}")));
    }
    let cloud = load_cloud(path)?;
    let cloud = if scale == 1.0 { cloud } else { cloud.scaled(scale) };
    ObjectModel::new(class_id, cloud)
}

/// Loads every model file in `dir`; class ids follow the sorted file names.
pub fn load_models_dir(dir: &Path, scale: f64) -> Result<Vec<ObjectModel>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::File {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry?.path();
        let known = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| MODEL_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()));
        if path.is_file() && known {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(model_err(dir, "no model files"));
    }
    if files.len() > u16::MAX as usize {
        return Err(model_err(dir, "too many model files"));
    }
    files.sort();
    files
        .iter()
        .enumerate()
        .map(|(k, p)| load_model(p, k as u16, scale))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn p() -> &'static Path {
        Path::new("test")
    }

    #[test]
    fn xyz_rows() {
        let pts = parse_xyz("# header\n0 0 0\n1,2,3\n\n4 5 6 0.1 0.2 0.3\n", p()).unwrap();
        assert_eq!(pts, vec![Vec3::zeros(), Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, 5.0, 6.0)]);
        let err = parse_xyz("1 2\n", p()).unwrap_err();
        assert!(err.to_string().contains(":1:"));
        assert!(parse_xyz("1 2 x\n", p()).is_err());
    }

    #[test]
    fn ascii_ply_with_faces() {
        let text = "ply\nformat ascii 1.0\ncomment x\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\nproperty uchar red\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n0 0 0 255\n1 0 0 255\n0 1 0.5 1\n3 0 1 2\n";
        let pts = parse_ply(text.as_bytes(), p()).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2], Vec3::new(0.0, 1.0, 0.5));
    }

    #[test]
    fn binary_ply() {
        let mut bytes = b"ply\nformat binary_little_endian 1.0\nelement vertex 2\nproperty double x\nproperty float nx\nproperty double y\nproperty double z\nend_header\n".to_vec();
        for v in [[1.0, 2.0, 3.0], [-4.0, 5.5, 6.25]] {
            bytes.extend_from_slice(&f64::to_le_bytes(v[0]));
            bytes.extend_from_slice(&0f32.to_le_bytes());
            bytes.extend_from_slice(&f64::to_le_bytes(v[1]));
            bytes.extend_from_slice(&f64::to_le_bytes(v[2]));
        }
        let pts = parse_ply(&bytes, p()).unwrap();
        assert_eq!(pts, vec![Vec3::new(1.0, 2.0, 3.0), Vec3::new(-4.0, 5.5, 6.25)]);
        assert!(parse_ply(&bytes[..bytes.len() - 4], p()).is_err());
    }

    #[test]
    fn model_files() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("b_model.xyz");
        std::fs::write(&a, "0 0 0\n10 0 0\n0 20 0\n").unwrap();
        let m = load_model(&a, 0, 1.0).unwrap();
        assert_eq!(m.cloud().len(), 3);
        let mm = load_model(&a, 0, 0.001).unwrap();
        assert!((m.diameter() / mm.diameter() - 1000.0).abs() < 1e-9);

        let empty = dir.path().join("a_empty.xyz");
        std::fs::File::create(&empty).unwrap().write_all(b"# nothing\n").unwrap();
        assert!(load_model(&empty, 0, 1.0).unwrap_err().to_string().contains("no vertices"));

        let nan = dir.path().join("nan.txt");
        std::fs::write(&nan, "0 0 0\nnan 1 1\n").unwrap();
        assert!(load_model(&nan, 0, 1.0).unwrap_err().to_string().contains("non-finite"));

        std::fs::remove_file(&empty).unwrap();
        std::fs::remove_file(&nan).unwrap();
        std::fs::write(dir.path().join("a_first.xyz"), "0 0 0\n1 1 1\n").unwrap();
        std::fs::write(dir.path().join("notes.md"), "ignored").unwrap();
        let models = load_models_dir(dir.path(), 1.0).unwrap();
        assert_eq!(models.len(), 2);
        assert_eq!(models[0].cloud().len(), 2);
        assert_eq!(models[1].class_id, 1);
    }
}
