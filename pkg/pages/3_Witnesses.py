import streamlit as st
import pandas as pd
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from database import save_document
from hashlab.errors import LabError
from hashlab.families import SPEC_GRAMMAR, parse_family_spec
from hashlab.strings import format_string
from hashlab.witnesses import (
    HTFamily,
    binomial_collision_pair,
    field_for,
    fourwise_break,
    hT_family,
    perfect_unary_witness,
    tau_collision_pair,
    threewise_break,
    unary_forced_collision,
)
from utils.report_utils import fraction_text, to_jsonable

st.set_page_config(page_title="Witnesses", page_icon="#", layout="wide")

st.title("Collision Witnesses")

kind = st.selectbox(
    "Witness",
    [
        "unary-forced",
        "hT-family",
        "perfect-unary",
        "binomial-pair",
        "tau-pair",
        "threewise-break",
        "fourwise-break",
    ],
)

L = st.number_input("L", min_value=1, max_value=16, value=2)
extra = {}
if kind == "tau-pair":
    extra["p"] = st.number_input("Prime p (0 = GF(2^L))", min_value=0, value=5)
    extra["n"] = st.number_input("n", min_value=1, value=2)
elif kind == "hT-family":
    extra["wrap"] = st.radio("Wrap", ["published", "counter"])
elif kind in ("threewise-break", "fourwise-break"):
    default = "zobrist:L=1,sigma=2,maxlen=2" if kind == "fourwise-break" else "pearson:L=2"
    extra["family"] = st.text_input("Family", value=default, help=SPEC_GRAMMAR)


def build():
    if kind == "unary-forced":
        return unary_forced_collision(int(L))
    if kind == "hT-family":
        return hT_family(int(L), extra["wrap"]).witness
    if kind == "perfect-unary":
        return perfect_unary_witness(int(L))
    if kind == "binomial-pair":
        return binomial_collision_pair(int(L))
    if kind == "tau-pair":
        field = field_for(p=int(extra["p"])) if extra["p"] else field_for(L=int(L))
        return tau_collision_pair(int(extra["n"]), field)
    spec = parse_family_spec(extra["family"])
    return threewise_break(spec) if kind == "threewise-break" else fourwise_break(spec)


if st.button("Build witness"):
    try:
        with st.spinner("Building and certifying..."):
            st.session_state["witness"] = build()
    except LabError as e:
        st.error(f"Error: {e}")
        st.session_state.pop("witness", None)

if "witness" in st.session_state:
    witness = st.session_state["witness"]
    certificate = witness.certificate
    if certificate.passed:
        st.success(f"Certificate ({certificate.mode}) passed: {certificate.detail}")
    else:
        st.error(f"Certificate ({certificate.mode}) failed: {certificate.detail}")

    col1, col2 = st.columns(2)
    with col1:
        st.write(f"**Claim:** {fraction_text(witness.claim)}")
        st.write(f"**Measured:** {fraction_text(certificate.measured)}")
        if witness.strings:
            st.write("**Strings:**")
            for s in witness.strings:
                st.code(format_string(s))
        if witness.lengths:
            st.write(f"**Lengths:** {', '.join(str(n) for n in witness.lengths)}")
    with col2:
        st.json(to_jsonable(witness.parameters))
        if witness.values:
            st.json(to_jsonable(witness.values))

    if witness.kind == "hT-family" and witness.parameters["L"] <= 3:
        family = HTFamily(witness.parameters["L"], witness.parameters["wrap"])
        limit = witness.parameters["max_length"]
        rows = family.value_rows(limit)
        frame = pd.DataFrame(rows, columns=[f"T={T}" for T in range(1, family.size + 1)])
        frame.index.name = "r"
        st.dataframe(frame, use_container_width=True)

    if st.button("Save witness"):
        row_id = save_document("witness", witness)
        st.success(f"Saved as row {row_id}")
