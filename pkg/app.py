import streamlit as st
from database import init_db, list_documents, TABLES

st.set_page_config(
    page_title="Iterated Hashing Lab",
    page_icon="#",
    layout="wide",
    initial_sidebar_state="expanded",
)


def main():
    st.title("Iterated String Hashing Lab")

    st.markdown("""
    ### Exact verification of iterated hash families

    Every probability on these pages is computed by enumerating the whole family
    and reported as an exact fraction, unless a page says Monte-Carlo.

    **Pages:**
    - **Bounds:** length bounds beyond which iterated hashing cannot be universal, and the collision table for Generalized Pearson.
    - **Verify:** uniformity, almost universality and k-wise independence of any family spec.
    - **Witnesses:** forced collisions and separating families, each with its certificate.

    ---
    """)

    # Initialize DB on app start if not exists
    if 'db_initialized' not in st.session_state:
        path = init_db()
        st.session_state['db_initialized'] = True
        st.success(f"Results database ready at {path}")

    st.markdown("### Saved results")
    for table in TABLES:
        df = list_documents(table)
        st.write(f"**{table}** ({len(df)})")
        if not df.empty:
            st.dataframe(df, use_container_width=True)

    st.sidebar.info("Select a page from the sidebar to navigate.")


if __name__ == "__main__":
    main()
