# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled map enumeration kernel; same contract as ``_kernels_py.face_census``."""
from libc.stdlib cimport malloc, free

cdef enum:
    MAXD = 64


cdef struct State:
    int n
    int first_partner
    int sigma[MAXD]
    int mate[MAXD]
    int seen[MAXD]
    int vertex[MAXD]
    int parent[MAXD]
    int nv
    int tag
    long long faces[MAXD + 1]
    long long disconnected
    long long examined


cdef inline int find(int* parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef void leaf(State* st) noexcept nogil:
    cdef int n = st.n
    cdef int d, e, a, b, comps, count, k
    st.examined += 1
    # connectivity on the vertex graph: union the endpoints of each edge
    comps = st.nv
    for k in range(st.nv):
        st.parent[k] = k
    for d in range(n):
        e = st.mate[d]
        if e > d:
            a = find(st.parent, st.vertex[d])
            b = find(st.parent, st.vertex[e])
            if a != b:
                st.parent[a] = b
                comps -= 1
    if comps != 1:
        st.disconnected += 1
        return
    st.tag += 1
    count = 0
    for k in range(n):
        if st.seen[k] != st.tag:
            count += 1
            e = k
            while st.seen[e] != st.tag:
                st.seen[e] = st.tag
                e = st.sigma[st.mate[e]]
    st.faces[count] += 1


cdef void rec(State* st, int used) noexcept nogil:
    cdef int i = 0, j
    if used == st.n:
        leaf(st)
        return
    while st.mate[i] >= 0:
        i += 1
    for j in range(i + 1, st.n):
        if st.mate[j] < 0:
            if i == 0 and st.first_partner >= 0 and j != st.first_partner:
                continue
            st.mate[i] = j
            st.mate[j] = i
            rec(st, used + 2)
            st.mate[i] = -1
            st.mate[j] = -1


def face_census(sigma, int first_partner=-1):
    cdef int n = len(sigma)
    cdef int k, d
    if n > MAXD:
        raise ValueError(f"at most {MAXD} darts supported")
    cdef State* st = <State*> malloc(sizeof(State))
    if st == NULL:
        raise MemoryError()
    try:
        st.n = n
        st.first_partner = first_partner
        st.tag = 0
        st.disconnected = 0
        st.examined = 0
        for k in range(MAXD):
            st.mate[k] = -1
            st.seen[k] = 0
        for k in range(MAXD + 1):
            st.faces[k] = 0
        for k in range(n):
            st.sigma[k] = sigma[k]
        # vertices are the cycles of sigma; label each dart by its cycle
        for k in range(n):
            st.vertex[k] = -1
        st.nv = 0
        for k in range(n):
            if st.vertex[k] < 0:
                d = k
                while st.vertex[d] < 0:
                    st.vertex[d] = st.nv
                    d = st.sigma[d]
                st.nv += 1
        if n > 0:
            with nogil:
                rec(st, 0)
        return [st.faces[k] for k in range(n + 1)], st.disconnected, st.examined
    finally:
        free(st)
