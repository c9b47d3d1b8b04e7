#pragma once

// Shared example programs: single-source shortest-path distances with
// shortest-path-edge selection, and graph-centre election by closeness over an
// ordered node list.

namespace fixtures {

inline const char* const SHORTEST_PATH =
    "min ds/2.\n"
    "ds(X,0) :- source(X).\n"
    "ds(Y,M+N) :- ds(X,M), edge(X,Y,N).\n"
    "sp_edge(X,Y) :- lub ds(X,M1), lub ds(Y,M2), edge(X,Y,N), target(Y), M1+N = M2.\n"
    "sp_edge(X,Y) :- lub ds(X,M1), lub ds(Y,M2), edge(X,Y,N), sp_edge(Y,Z), M1+N = M2.\n";

inline const char* const CLOSENESS =
    "min d/3.\n"
    "min fness_acc/3.\n"
    "min fness/2.\n"
    "d(X,X,0) :- node(X).\n"
    "d(X,Z,M+N) :- d(X,Y,M), edge(Y,Z,N).\n"
    "fness_acc(X,Y,N) :- first(Y), d(X,Y,N).\n"
    "fness_acc(X,Z,M+N) :- next(Y,Z), fness_acc(X,Y,M), d(X,Z,N).\n"
    "fness(X,N) :- fness_acc(X,Y,N), last(Y).\n"
    "centre_acc(X,X) :- first(X).\n"
    "centre_acc(Y,Y) :- next(X,Y), centre_acc(X,Z), lub fness(Z,N), lub fness(Y,M), M < N.\n"
    "centre_acc(Y,Z) :- next(X,Y), centre_acc(X,Z), lub fness(Z,N), lub fness(Y,M), N <= M.\n"
    "centre(Z) :- centre_acc(X,Z), last(X).\n";

}  // namespace fixtures
