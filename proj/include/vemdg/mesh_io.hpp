#pragma once

#include <string>

#include "vemdg/geometry.hpp"

namespace vemdg {

/// Reads a mesh from the JSON schema
///   { "box": [x0,y0,x1,y1], "vertices": [[x,y],...], "cells": [[v,...],...] }.
/// Edges and geometry are derived on load. Throws MeshError on schema
/// violations, duplicated loop vertices, or inverted cells (with cell index).
PolygonalMesh read_mesh(const std::string& path);

/// Writes the JSON schema with 17 significant digits so that write -> read
/// reproduces every coordinate bit-exactly.
void write_mesh(const PolygonalMesh& mesh, const std::string& path);

}  // namespace vemdg
