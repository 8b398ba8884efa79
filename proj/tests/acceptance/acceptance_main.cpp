// SPDX-License-Identifier: Apache-2.0
#include "d2dcache/d2dcache.hpp"
int main() { return 0; }
