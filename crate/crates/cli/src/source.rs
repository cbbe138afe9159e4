use dqc1lab::haar::sample_haar_unitary;
use dqc1lab::operator::interchange::read_matrix_file;
use dqc1lab::operator::{gates, UnitaryOperator};

use crate::args::{Builtin, SourceArgs};
use crate::CliError;

/// The unitary named by the source flags, with a short label for reports.
pub fn resolve(args: &SourceArgs) -> Result<(UnitaryOperator, String), CliError> {
    if let Some(path) = &args.file {
        let m = read_matrix_file(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let u = UnitaryOperator::new(m).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        return Ok((u, format!("file:{}", path.display())));
    }
    let builtin = match (args.builtin, args.rotation_angle) {
        (None, Some(_)) | (Some(Builtin::Rotation), _) => Builtin::Rotation,
        (Some(_), Some(_)) => return Err(CliError::input("--rotation-angle only applies to the rotation builtin")),
        (Some(b), None) => b,
        (None, None) => return Err(CliError::input("no unitary given: use --builtin, --file or --rotation-angle")),
    };
    let label = format!("builtin:{}", builtin_name(builtin));
    let u = match builtin {
        Builtin::Identity => {
            if !(1..=12).contains(&args.n) {
                return Err(CliError::input(format!("--n {} is outside 1..=12", args.n)));
            }
            UnitaryOperator::identity(args.n)
        }
        Builtin::PauliX => gates::pauli_x(),
        Builtin::PauliY => gates::pauli_y(),
        Builtin::PauliZ => gates::pauli_z(),
        Builtin::Hadamard => gates::hadamard(),
        Builtin::Jones => gates::jones_unitary(),
        Builtin::Rotation => {
            let angle = args
                .rotation_angle
                .or(args.angle)
                .ok_or_else(|| CliError::input("the rotation builtin needs --angle"))?;
            let axis = [args.axis[0], args.axis[1], args.axis[2]];
            gates::rotation(axis, angle).map_err(|e| CliError::input(e.to_string()))?
        }
        Builtin::Haar => sample_haar_unitary(args.n, args.seed).map_err(|e| CliError::input(e.to_string()))?,
    };
    Ok((u, label))
}

fn builtin_name(b: Builtin) -> &'static str {
    match b {
        Builtin::Identity => "identity",
        Builtin::PauliX => "pauli-x",
        Builtin::PauliY => "pauli-y",
        Builtin::PauliZ => "pauli-z",
        Builtin::Hadamard => "hadamard",
        Builtin::Rotation => "rotation",
        Builtin::Jones => "jones",
        Builtin::Haar => "haar",
    }
}
