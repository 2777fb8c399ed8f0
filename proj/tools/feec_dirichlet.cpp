// SPDX-License-Identifier: Apache-2.0

#include "feec/cli.hpp"

int main(int argc, char **argv)
{
  return feec::run_cli(argc, argv);
}
