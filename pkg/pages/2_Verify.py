import streamlit as st
import pandas as pd
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.family_presets import CONSTRUCTIONS
from config.lab_config import get_lab_config
from database import list_documents, save_document
from hashlab.errors import LabError
from hashlab.families import SPEC_GRAMMAR, family_size, parse_family_spec, render_family_spec
from hashlab.strings import StringSet
from hashlab.verifier import exact_report, monte_carlo_report
from utils.report_utils import fraction_text, to_jsonable

st.set_page_config(page_title="Verify", page_icon="#", layout="wide")

st.title("Verify a Hash Family")
st.caption(f"Family spec grammar: `{SPEC_GRAMMAR}`")

with st.form("verify_form"):
    col1, col2 = st.columns(2)

    with col1:
        construction = st.selectbox("Construction", CONSTRUCTIONS, index=CONSTRUCTIONS.index("tabulated"))
        options = st.text_input("Options", value="L=2,sigma=2", help="e.g. L=2,sigma=2 or p=5")
        max_len = st.number_input("Max string length", min_value=1, max_value=12, value=2)
        unary = st.checkbox("Unary strings only")

    with col2:
        mode = st.radio("Mode", ["Exact", "Monte-Carlo"])
        k_max = st.selectbox("k-wise up to", [2, 3, 4])
        trials = st.number_input("Monte-Carlo trials", min_value=100, max_value=1_000_000, value=10_000)
        seed = st.number_input("Seed", value=get_lab_config()["seed"])

    submitted = st.form_submit_button("Run")

if submitted:
    try:
        spec = parse_family_spec(f"{construction}:{options}" if options.strip() else construction)
        if unary:
            strings = StringSet.unary(int(max_len), 0, spec.alphabet_size)
        else:
            strings = StringSet.for_family(spec, int(max_len))
        st.write(f"**Family:** `{render_family_spec(spec)}` ({family_size(spec)} instances, {strings.count()} strings)")
        with st.spinner("Computing..."):
            if mode == "Exact":
                report = exact_report(spec, strings, k_max=k_max)
            else:
                report = monte_carlo_report(spec, strings, trials=int(trials), seed=int(seed))
        st.session_state["report"] = report
    except LabError as e:
        st.error(f"Error: {e}")
        st.session_state.pop("report", None)

if "report" in st.session_state:
    report = st.session_state["report"]
    col1, col2, col3, col4 = st.columns(4)
    col1.metric("eps (universal)", fraction_text(report.eps_au))
    col2.metric("eps (XOR universal)", fraction_text(report.eps_axu))
    col3.metric("eps (strongly universal)", fraction_text(report.eps_asu))
    col4.metric("Pairwise independent", str(report.pairwise_independent))

    st.write(f"**Uniform:** {report.uniform}")
    if report.kwise:
        st.dataframe(
            pd.DataFrame(
                [
                    {"k": k, "independent": report.kwise.get(k), "max collision": fraction_text(p)}
                    for k, p in sorted(report.kwise_collision.items())
                ]
            ),
            use_container_width=True,
        )
    if report.intervals:
        st.write("**Wilson intervals:**")
        st.json({name: list(bounds) for name, bounds in report.intervals.items()})
    with st.expander("Witnesses"):
        st.json(to_jsonable(report.witnesses))

    if st.button("Save report"):
        row_id = save_document("verification_report", report)
        st.success(f"Saved as row {row_id}")

st.markdown("---")
st.markdown("### Saved reports")
saved = list_documents("verification_reports")
if not saved.empty:
    st.dataframe(saved, use_container_width=True)
else:
    st.info("No saved reports yet.")
