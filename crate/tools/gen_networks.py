#!/usr/bin/env python3
"""Generate the bundled CNN layer descriptors.

Layer geometry follows the canonical published architecture definitions
(Keras Applications for ResNet50 and MobileNetV2, the original Inception-v1
table for GoogleNet, torchvision for ShuffleNetV2 1.0x). Only layers that
carry kernels or pooling windows are emitted; activations are folded into
the producing layer.

Usage: python3 tools/gen_networks.py crates/core/networks
"""
import json
import os
import sys


class Net:
    def __init__(self, name):
        self.name = name
        self.layers = []

    def add(self, name, kind, h, w, d, k, l, stride=1, padding=0):
        hout = (h + 2 * padding - k) // stride + 1
        wout = (w + 2 * padding - k) // stride + 1
        assert hout >= 1 and wout >= 1, name
        self.layers.append(
            {
                "name": name,
                "kind": kind,
                "H": h,
                "W": w,
                "D": d,
                "K": k,
                "L": l,
                "stride": stride,
                "padding": padding,
            }
        )
        return hout

    def conv(self, name, hw, d, k, l, stride=1, padding=None):
        if padding is None:
            padding = k // 2
        return self.add(name, "conv", hw, hw, d, k, l, stride, padding)

    def dw(self, name, hw, d, k=3, stride=1):
        return self.add(name, "depthwise_conv", hw, hw, d, k, d, stride, k // 2)

    def pool(self, name, hw, d, k, stride, padding=0):
        return self.add(name, "pool", hw, hw, d, k, d, stride, padding)

    def fc(self, name, d, l):
        return self.add(name, "fully_connected", 1, 1, d, 1, l)

    def dump(self):
        return {"name": self.name, "layers": self.layers}


def resnet50():
    n = Net("resnet50")
    hw = n.conv("conv1", 224, 3, 7, 64, 2, 3)
    hw = n.pool("pool1", hw, 64, 3, 2, 1)
    d = 64
    stages = [(2, 64, 3, 1), (3, 128, 4, 2), (4, 256, 6, 2), (5, 512, 3, 2)]
    for stage, f, blocks, stride in stages:
        for b in range(blocks):
            s = stride if b == 0 else 1
            p = f"conv{stage}_block{b + 1}"
            if b == 0:
                n.conv(f"{p}_0_conv", hw, d, 1, 4 * f, s, 0)
            nhw = n.conv(f"{p}_1_conv", hw, d, 1, f, s, 0)
            n.conv(f"{p}_2_conv", nhw, f, 3, f, 1, 1)
            n.conv(f"{p}_3_conv", nhw, f, 1, 4 * f, 1, 0)
            hw, d = nhw, 4 * f
    n.pool("avg_pool", hw, d, hw, 1)
    n.fc("predictions", d, 1000)
    return n


INCEPTION = [
    # name, in_hw, (1x1, 3x3red, 3x3, 5x5red, 5x5, poolproj)
    ("3a", 28, (64, 96, 128, 16, 32, 32)),
    ("3b", 28, (128, 128, 192, 32, 96, 64)),
    ("4a", 14, (192, 96, 208, 16, 48, 64)),
    ("4b", 14, (160, 112, 224, 24, 64, 64)),
    ("4c", 14, (128, 128, 256, 24, 64, 64)),
    ("4d", 14, (112, 144, 288, 32, 64, 64)),
    ("4e", 14, (256, 160, 320, 32, 128, 128)),
    ("5a", 7, (256, 160, 320, 32, 128, 128)),
    ("5b", 7, (384, 192, 384, 48, 128, 128)),
]


def googlenet():
    n = Net("googlenet")
    hw = n.conv("conv1_7x7", 224, 3, 7, 64, 2, 3)
    hw = n.pool("pool1_3x3", hw, 64, 3, 2, 1)
    n.conv("conv2_3x3_reduce", hw, 64, 1, 64)
    n.conv("conv2_3x3", hw, 64, 3, 192)
    hw = n.pool("pool2_3x3", hw, 192, 3, 2, 1)
    d = 192
    for name, in_hw, (c1, r3, c3, r5, c5, pp) in INCEPTION:
        if in_hw != hw:
            hw = n.pool(f"pool_before_{name}", hw, d, 3, 2, 1)
        p = f"inception_{name}"
        n.conv(f"{p}_1x1", hw, d, 1, c1)
        n.conv(f"{p}_3x3_reduce", hw, d, 1, r3)
        n.conv(f"{p}_3x3", hw, r3, 3, c3)
        n.conv(f"{p}_5x5_reduce", hw, d, 1, r5)
        n.conv(f"{p}_5x5", hw, r5, 5, c5)
        n.pool(f"{p}_pool", hw, d, 3, 1, 1)
        n.conv(f"{p}_pool_proj", hw, d, 1, pp)
        d = c1 + c3 + c5 + pp
        if name in ("4a", "4d"):
            # auxiliary classifier heads of the trained model
            a = "aux1" if name == "4a" else "aux2"
            ahw = n.pool(f"{a}_avg_pool", hw, d, 5, 3)
            n.conv(f"{a}_conv", ahw, d, 1, 128)
            n.fc(f"{a}_fc1", ahw * ahw * 128, 1024)
            n.fc(f"{a}_fc2", 1024, 1000)
    n.pool("avg_pool", hw, d, hw, 1)
    n.fc("loss3_classifier", d, 1000)
    return n


def mobilenet_v2():
    n = Net("mobilenet_v2")
    hw = n.conv("Conv1", 224, 3, 3, 32, 2, 1)
    n.dw("expanded_conv_depthwise", hw, 32)
    n.conv("expanded_conv_project", hw, 32, 1, 16)
    d = 16
    block = 1
    for t, c, reps, s in [(6, 24, 2, 2), (6, 32, 3, 2), (6, 64, 4, 2),
                          (6, 96, 3, 1), (6, 160, 3, 2), (6, 320, 1, 1)]:
        for i in range(reps):
            stride = s if i == 0 else 1
            p = f"block_{block}"
            e = d * t
            n.conv(f"{p}_expand", hw, d, 1, e)
            nhw = n.dw(f"{p}_depthwise", hw, e, 3, stride)
            n.conv(f"{p}_project", nhw, e, 1, c)
            hw, d = nhw, c
            block += 1
    n.conv("Conv_1", hw, d, 1, 1280)
    n.pool("global_average_pooling", hw, 1280, hw, 1)
    n.fc("predictions", 1280, 1000)
    return n


def shufflenet_v2():
    n = Net("shufflenet_v2")
    hw = n.conv("conv1", 224, 3, 3, 24, 2, 1)
    hw = n.pool("maxpool", hw, 24, 3, 2, 1)
    d = 24
    for stage, c, reps in [(2, 116, 4), (3, 232, 8), (4, 464, 4)]:
        half = c // 2
        for i in range(reps):
            p = f"stage{stage}_unit{i + 1}"
            if i == 0:
                nhw = n.dw(f"{p}_branch1_dw", hw, d, 3, 2)
                n.conv(f"{p}_branch1_pw", nhw, d, 1, half)
                n.conv(f"{p}_branch2_pw1", hw, d, 1, half)
                n.dw(f"{p}_branch2_dw", hw, half, 3, 2)
                n.conv(f"{p}_branch2_pw2", nhw, half, 1, half)
                hw = nhw
            else:
                n.conv(f"{p}_branch2_pw1", hw, half, 1, half)
                n.dw(f"{p}_branch2_dw", hw, half, 3, 1)
                n.conv(f"{p}_branch2_pw2", hw, half, 1, half)
            d = c
    n.conv("conv5", hw, d, 1, 1024)
    n.pool("global_pool", hw, 1024, hw, 1)
    n.fc("fc", 1024, 1000)
    return n


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "."
    for net in (resnet50(), googlenet(), mobilenet_v2(), shufflenet_v2()):
        path = os.path.join(out, f"{net.name}.json")
        with open(path, "w") as f:
            json.dump(net.dump(), f, indent=1)
            f.write("\n")


if __name__ == "__main__":
    main()
