// SPDX-License-Identifier: Apache-2.0
//
// Pulls the CLI entry point into the unit-test binary without its main().

#define ROMA_CLI_NO_MAIN
#include "../tools/roma.cpp"
