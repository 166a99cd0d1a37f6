import streamlit as st
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from database import save_document
from hashlab.bounds import bounds_table, divisor_table, epsilon_impossible_length
from hashlab.errors import LabError
from hashlab.gp_table import emit_gp_table, gp_table_frame
from utils.progress_utils import subscribe
from utils.report_utils import to_jsonable

st.set_page_config(page_title="Bounds", page_icon="#", layout="wide")

st.title("Length Bounds and Collision Tables")

st.markdown("### Impossibility bounds")
word_sizes = st.multiselect("Word sizes L", [1, 2, 3, 4, 8, 16, 24, 32], default=[2, 4, 8, 16])
st.caption("Columns flagged log2 hold lg of the bound. struct_almost is left empty past L=26.")
epsilon = st.text_input("epsilon (for the almost-universal columns)", value="1/2")

if word_sizes:
    try:
        df = bounds_table(sorted(word_sizes), epsilon)
        st.dataframe(df, use_container_width=True)
        st.download_button("Download CSV", df.to_csv(index=False, lineterminator="\n"), "bounds.csv")
        if st.button("Save bound rows"):
            row_id = save_document("bound_rows", df.to_dict(orient="records"))
            st.success(f"Saved as row {row_id}")
    except (LabError, ValueError, ZeroDivisionError) as e:
        st.error(f"Error: {e}")

with st.expander("Shortest length that defeats epsilon-almost universality"):
    L = st.number_input("L", min_value=1, max_value=8, value=2)
    eps_text = st.text_input("epsilon", value="1/3", key="eps_length")
    try:
        st.write(f"**Length:** {epsilon_impossible_length(int(L), eps_text)}")
    except (LabError, ValueError, ZeroDivisionError) as e:
        st.warning(str(e))

st.markdown("---")
st.markdown("### Generalized Pearson collision table (L=2)")
n_max = st.slider("Largest length n", min_value=1, max_value=11, value=5)
certain = st.checkbox("Run the certain-collision search for long rows", value=True)

if st.button("Compute table"):
    progress = st.progress(0)
    unsubscribe = subscribe(lambda event: progress.progress(min(100, int(event["progress_percent"]))))
    with st.spinner("Enumerating all 1024 instances..."):
        try:
            st.session_state["gp_rows"] = emit_gp_table(L=2, n_max=n_max, certain=certain)
        except LabError as e:
            st.error(f"Error: {e}")
        finally:
            unsubscribe()

if "gp_rows" in st.session_state:
    rows = st.session_state["gp_rows"]
    st.dataframe(gp_table_frame(rows), use_container_width=True)
    if st.button("Save collision table"):
        row_id = save_document("gp_table", [to_jsonable(row) for row in rows])
        st.success(f"Saved as row {row_id}")

st.markdown("---")
st.markdown("### Divisor counts (Pearson unary collisions)")
n_div = st.number_input("n max", min_value=2, max_value=10_000, value=64)
divisors = divisor_table(int(n_div))
st.dataframe(divisors, use_container_width=True)
