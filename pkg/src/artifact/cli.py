"""Command-line front end."""

import contextlib
import io
import json
import re
import shlex
from importlib import resources
from pathlib import Path

import click

from .arthur import (
    IRREDUCIBLE_BAD,
    ESParseError,
    ExtendedMultiSegment,
    InvalidExtendedMultiSegment,
    build_pi,
    decompose_unitary,
    packet_of,
    parse_extended,
    validate,
)
from .clrep import AParameter, ClValidationError, PiParseError, parse_pi_notation, render_pi
from .core import DEFAULT_RHO, CuspidalLabel, HalfInt
from .derivatives import (
    ZERO,
    Cuspidal,
    DeltaZeroMinusOne,
    DerivativeError,
    DerivativeTrace,
    ZZeroOne,
    composite_d_max,
    run_chain,
    speh_chains,
)
from .engine import (
    EngineError,
    InductionProblem,
    _pi_datum,
    first_reducible_point,
    image_chains,
    is_irreducible,
    socle,
)
from .glrep import NotReduced, SpehShape

PARSE_ERROR = 2
VALIDATION_ERROR = 3


class ParseFailure(click.UsageError):
    exit_code = PARSE_ERROR


class ValidationFailure(click.ClickException):
    exit_code = VALIDATION_ERROR


def parse_rho(text):
    """'{id:rho,dim:1,parity:0}' (quotes optional) or plain JSON."""
    if not text:
        return DEFAULT_RHO
    try:
        return CuspidalLabel.from_json(json.loads(text))
    except (ValueError, TypeError):
        pass
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ParseFailure(f"bad --rho {text!r}")
    fields = {}
    for part in body[1:-1].split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition(":")
        if not sep:
            raise ParseFailure(f"bad --rho field {part!r}")
        fields[key.strip().strip("'\"")] = value.strip().strip("'\"")
    try:
        return CuspidalLabel.from_json(fields)
    except ValueError as err:
        raise ParseFailure(f"bad --rho: {err}") from None


def parse_half(text, name):
    try:
        return HalfInt.parse(text)
    except ValueError:
        raise ParseFailure(f"{name} must be a half-integer such as 1/2 or -3/2, got {text!r}") from None


def parse_pi_arg(text, rho):
    """An extended multi-segment '{([A,B];l,eta),...}' or a Langlands datum 'L(...)' / 'pi(...)'."""
    labels = {rho.id: rho, "rho": rho} if rho.id == "rho" else {rho.id: rho}
    try:
        if text.strip().startswith(("L(", "pi(")):
            return parse_pi_notation(text, labels)
        return parse_extended(text, labels)
    except (PiParseError, ESParseError) as err:
        raise ParseFailure(str(err)) from None
    except ClValidationError as err:
        raise ValidationFailure(str(err)) from None


def require_valid(E):
    if isinstance(E, ExtendedMultiSegment):
        ok, problems = validate(E)
        if not ok:
            raise ValidationFailure("; ".join(problems))
    return E


_PSI_ITEM = re.compile(r"\s*S?(\d+)\s*[xX]\s*S?(\d+)\s*")


def parse_psi(text, rho):
    items = []
    for part in text.split("+"):
        m = _PSI_ITEM.fullmatch(part)
        if not m:
            raise ParseFailure(f"bad summand {part!r}; write a parameter as '2x2+5x3'")
        items.append((rho, int(m.group(1)), int(m.group(2))))
    try:
        return AParameter(items)
    except ValueError as err:
        raise ValidationFailure(str(err)) from None


def emit(ctx, payload, lines):
    if ctx.obj.get("json"):
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            click.echo(line)


def datum_payload(d):
    return {"notation": render_pi(d), "datum": d.to_json()}


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, as_json):
    """Socles, irreducibility and packets for u_rho(a,b)|.|^s x| pi."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


def _problem_options(f):
    f = click.option("--rho", default=None, help="Cuspidal label, e.g. '{id:rho,dim:1,parity:0}'.")(f)
    f = click.option("--a", "a", type=int, required=True)(f)
    f = click.option("--b", "b", type=int, required=True)(f)
    return f


def _problem(rho, a, b, s, pi_text):
    rho = parse_rho(rho)
    if pi_text is None:
        raise ParseFailure("give --pi or --E")
    pi = require_valid(parse_pi_arg(pi_text, rho))
    try:
        u = SpehShape(rho, a, b, parse_half(s, "--s"))
    except ValueError as err:
        raise ValidationFailure(str(err)) from None
    return InductionProblem(u, pi)


def _engine_call(fn, *args):
    try:
        return fn(*args)
    except (EngineError, InvalidExtendedMultiSegment, ClValidationError, NotReduced, DerivativeError) as err:
        raise ValidationFailure(str(err)) from None


@main.command("socle")
@_problem_options
@click.option("--s", "s", default="0")
@click.option("--pi", "pi_text", default=None)
@click.option("--E", "e_text", default=None)
@click.option("--trace", is_flag=True, help="Also print the derivative trace of pi along the Speh chains.")
@click.pass_context
def socle_cmd(ctx, rho, a, b, s, pi_text, e_text, trace):
    """soc(u_rho(a,b)|.|^s x| pi)."""
    problem = _problem(rho, a, b, s, pi_text or e_text)
    result = _engine_call(socle, problem)
    payload = {"summands": [datum_payload(d) for d in result.summands], "regime": result.regime, "trace": []}
    lines = [render_pi(d) for d in result.summands]
    if trace:
        tr = _speh_trace(problem)
        payload["trace"] = tr.to_json()
        lines.append("trace: " + " ".join(f"{k}@{kind}" for kind, k in tr))
    emit(ctx, payload, lines)


def _speh_trace(problem):
    u = problem.u
    pi = _pi_datum(problem.pi)
    try:
        chains = speh_chains(u.rho, u.a, u.b, u.s)
    except DerivativeError:
        chains = image_chains(u) if u.s != 0 else []
    _, tr = run_chain(pi, [k for c in chains for k in c])
    return tr


@main.command("irred")
@_problem_options
@click.option("--s", "s", default="0")
@click.option("--pi", "pi_text", default=None)
@click.option("--E", "e_text", default=None)
@click.pass_context
def irred_cmd(ctx, rho, a, b, s, pi_text, e_text):
    """Is u_rho(a,b)|.|^s x| pi irreducible?"""
    problem = _problem(rho, a, b, s, pi_text or e_text)
    verdict = _engine_call(is_irreducible, problem)
    emit(ctx, {"irreducible": verdict}, ["irreducible" if verdict else "reducible"])


@main.command("frp")
@_problem_options
@click.option("--pi", "pi_text", default=None)
@click.option("--E", "e_text", default=None)
@click.pass_context
def frp_cmd(ctx, rho, a, b, pi_text, e_text):
    """First reducible point s_0 >= 0."""
    problem = _problem(rho, a, b, "0", pi_text or e_text)
    s0 = _engine_call(first_reducible_point, problem.u, problem.pi)
    emit(ctx, {"s0": str(s0)}, [str(s0)])


@main.command("packet")
@click.option("--rho", default=None)
@click.option("--psi", required=True, help="Summands a x b joined by '+', e.g. '2x2+5x3'.")
@click.pass_context
def packet_cmd(ctx, rho, psi):
    """Members pi(E) of the A-packet of psi."""
    psi = parse_psi(psi, parse_rho(rho))
    if not psi.good_parity:
        raise ValidationFailure("packet needs a parameter of good parity")
    members = _engine_call(packet_of, psi)
    payload = {"members": [{"E": E.to_json(), "extended": str(E), **datum_payload(d)} for E, d in members]}
    emit(ctx, payload, [f"{E}  {render_pi(d)}" for E, d in members])


@main.command("decompose0")
@_problem_options
@click.option("--E", "e_text", required=True)
@click.pass_context
def decompose0_cmd(ctx, rho, a, b, e_text):
    """u_rho(a,b) x| pi(E) as a sum of pi(E_(l,eta))."""
    problem = _problem(rho, a, b, "0", e_text)
    if not isinstance(problem.pi, ExtendedMultiSegment):
        raise ParseFailure("--E must be an extended multi-segment")
    pieces = _engine_call(decompose_unitary, problem.u, problem.pi)
    if pieces == IRREDUCIBLE_BAD:
        emit(ctx, {"summands": [], "irreducible_bad_parity": True}, [IRREDUCIBLE_BAD])
        return
    payload = {"summands": [{"E": E.to_json(), "extended": str(E), **datum_payload(d)} for E, d in pieces]}
    emit(ctx, payload, [f"{E}  {render_pi(d)}" for E, d in pieces])


@main.command("derive")
@click.option("--rho", default=None)
@click.option("--pi", "pi_text", required=True)
@click.option("--kind", type=click.Choice(["cuspidal", "delta01", "z01", "chain"]), default="cuspidal")
@click.option("--x", "x", default=None, help="Exponent for a cuspidal derivative.")
@click.option("--from", "start", default=None, help="First exponent of a chain.")
@click.option("--to", "end", default=None, help="Last exponent of a chain.")
@click.pass_context
def derive_cmd(ctx, rho, pi_text, kind, x, start, end):
    """Highest derivatives and composite chains."""
    rho = parse_rho(rho)
    pi = parse_pi_arg(pi_text, rho)
    if isinstance(pi, ExtendedMultiSegment):
        pi = build_pi(require_valid(pi))
        if pi is ZERO:
            raise ValidationFailure("pi(E) vanishes")
    try:
        if kind == "chain":
            if start is None or end is None:
                raise ParseFailure("--kind chain needs --from and --to")
            res, tr = composite_d_max(pi, rho, parse_half(start, "--from"), parse_half(end, "--to"))
        else:
            if kind == "cuspidal":
                if x is None:
                    raise ParseFailure("--kind cuspidal needs --x")
                step = Cuspidal(rho, parse_half(x, "--x"))
            elif kind == "delta01":
                step = DeltaZeroMinusOne(rho)
            else:
                step = ZZeroOne(rho)
            res, tr = run_chain(pi, [step])
    except (NotReduced, DerivativeError) as err:
        raise ValidationFailure(str(err)) from None
    payload = {"result": datum_payload(res), "trace": DerivativeTrace(tr).to_json()}
    emit(ctx, payload, [render_pi(res), "trace: " + " ".join(f"{k}@{kd}" for kd, k in tr)])


@main.command("validate")
@click.option("--rho", default=None)
@click.option("--E", "e_text", default=None)
@click.option("--pi", "pi_text", default=None)
@click.pass_context
def validate_cmd(ctx, rho, e_text, pi_text):
    """Check an extended multi-segment or a Langlands datum."""
    text = e_text or pi_text
    if text is None:
        raise ParseFailure("give --E or --pi")
    obj = parse_pi_arg(text, parse_rho(rho))
    if isinstance(obj, ExtendedMultiSegment):
        ok, problems = validate(obj)
        if not ok:
            emit(ctx, {"valid": False, "problems": problems}, problems)
            ctx.exit(VALIDATION_ERROR)
    emit(ctx, {"valid": True, "problems": []}, ["valid"])


@main.command("corpus")
@click.argument("source")
@click.pass_context
def corpus_cmd(ctx, source):
    """Run a golden corpus: a bundled name or a directory of NAME.args / NAME.expected pairs."""
    report, failures = run_corpus(source)
    for line in report:
        click.echo(line)
    if failures:
        ctx.exit(1)


def run(argv):
    """Run the CLI in-process; returns (exit code, stdout text)."""
    out = io.StringIO()
    code = 0
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(out):
        try:
            rv = main.main(list(argv), prog_name="artifact", standalone_mode=False)
            code = rv if isinstance(rv, int) else 0
        except click.exceptions.Exit as err:
            code = err.exit_code
        except click.ClickException as err:
            err.show()
            code = err.exit_code
        except click.exceptions.Abort:
            code = 1
    return code, out.getvalue()


def corpus_dir(source):
    path = Path(source)
    if path.is_dir():
        return path
    bundled = resources.files("artifact").joinpath("corpus", source)
    if bundled.is_dir():
        return Path(str(bundled))
    raise click.ClickException(f"no corpus named {source!r}")


def run_corpus(source):
    path = corpus_dir(source)
    report, failures = [], 0
    for args_file in sorted(path.glob("*.args")):
        expected_file = args_file.with_suffix(".expected")
        if not expected_file.exists():
            raise click.ClickException(f"{args_file.name} has no matching .expected file")
        argv = shlex.split(args_file.read_text())
        code, output = run(argv)
        ok = code == 0 and output.strip() == expected_file.read_text().strip()
        failures += not ok
        report.append(f"{'PASS' if ok else 'FAIL'} {args_file.stem}")
    report.append(f"{len(report) - failures} passed, {failures} failed")
    return report, failures


if __name__ == "__main__":
    main()
